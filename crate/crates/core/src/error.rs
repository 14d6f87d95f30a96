use thiserror::Error;

use crate::lattice::DivisorClass;
use crate::notation::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid collinearity matrix (rows {rows:?}): {reason}")]
    InvalidMatrix { rows: Vec<usize>, reason: String },

    #[error("classes {a} and {b} meet negatively ({product})")]
    NotPairwiseNonnegative {
        a: DivisorClass,
        b: DivisorClass,
        product: i64,
    },

    #[error("class {class} is not a valid (-2)-class: {reason}")]
    InvalidNegClass { class: DivisorClass, reason: String },

    #[error("classes are linearly dependent")]
    LinearlyDependent,

    #[error("class {0} is not in the candidate pool")]
    NotInPool(DivisorClass),

    #[error("class {0} is not orthogonal to K")]
    NotInKPerp(DivisorClass),

    #[error("class {0} is not nef")]
    NotNef(DivisorClass),

    #[error("multiplicity m{index} = {value} is out of range")]
    BadMultiplicity { index: usize, value: i64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("unknown configuration type {0:?}")]
    UnknownType(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors caused by bad input, false for internal consistency failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Consistency(_))
    }
}
