//! Configuration types of six essentially distinct points of the projective
//! plane whose blow-up has nef anticanonical class, and the Hilbert functions
//! and graded Betti numbers of fat point ideals supported at such points.
//!
//! Everything is computed from integer data: the intersection form on the
//! divisor class group, the list of (-2)-curves of a configuration type, and
//! the multiplicities of the fat point scheme.

pub mod cli;
pub mod curves;
pub mod error;
pub mod fatpoints;
pub mod lattice;
pub mod notation;
pub mod smith;
pub mod typeenum;
pub mod verify;

pub use curves::{full_neg, h0, h1, h2, is_nef, reduce_to_nef, NegCurveSet, ReductionResult};
pub use error::{Error, Result};
pub use fatpoints::{FatPointScheme, GradedResolution, HilbertFunction};
pub use lattice::{canonical_class, DivisorClass};
pub use notation::{format_negset, parse_negset};
pub use typeenum::{all_types, classify, type_by_id, ConfigurationType};
