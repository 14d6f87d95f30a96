//! Hilbert functions and graded Betti numbers of fat point ideals
//! `I(m1 p1 + ... + m6 p6)`.
//!
//! `dim I(Z)_t = h^0(F(Z,t))` with `F(Z,t) = tL - m1 E1 - ... - m6 E6`. The
//! number of minimal generators in degree `t+1` follows from the nef part `D`
//! of `F(Z,t)`, using that multiplication `H^0(D) x H^0(L) -> H^0(D+L)` has
//! maximal rank for nef `D`. The syzygy module `F1` is then forced by the
//! Hilbert function.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{full_neg, h0, reduce_to_nef, NegCurveSet};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, N_POINTS};
use crate::typeenum::{all_types, ConfigurationType};

pub type Multiplicities = [i64; N_POINTS];

/// Largest multiplicity accepted.
pub const MAX_MULTIPLICITY: i64 = 1000;

/// Degrees past the largest shift over which the resolution is re-checked.
const TAIL_WINDOW: i64 = 5;

pub(crate) fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `dim R_t = C(t+2, 2)`, zero for negative `t`.
pub fn forms_of_degree(t: i64) -> i64 {
    binom2(t + 2)
}

fn check_mults(m: &Multiplicities) -> Result<()> {
    for (index, &value) in m.iter().enumerate() {
        if !(0..=MAX_MULTIPLICITY).contains(&value) {
            return Err(Error::BadMultiplicity { index: index + 1, value });
        }
    }
    Ok(())
}

/// Moves multiplicity along each `Ei - Ej` of `neg` until `m_i >= m_j`.
/// The ideal is unchanged.
pub fn proximity_reduce(m: &Multiplicities, neg: &[DivisorClass]) -> Result<Multiplicities> {
    check_mults(m)?;
    let roots: Vec<(usize, usize)> = neg
        .iter()
        .filter(|c| c.d == 0)
        .filter_map(|c| {
            let i = c.m.iter().position(|&x| x == 1)?;
            let j = c.m.iter().position(|&x| x == -1)?;
            Some((i, j))
        })
        .collect();
    let mut m = *m;
    let guard = 1 + 6 * m.iter().sum::<i64>();
    let mut steps = 0;
    while let Some(&(i, j)) = roots.iter().find(|&&(i, j)| m[i] < m[j]) {
        steps += 1;
        assert!(steps <= guard, "proximity reduction did not terminate");
        m[i] += 1;
        m[j] -= 1;
    }
    Ok(m)
}

/// `F(Z,t) = tL - m1 E1 - ... - m6 E6`.
pub fn fatpoint_class(m: &Multiplicities, t: i64) -> DivisorClass {
    DivisorClass::new(t, m.map(|x| -x))
}

/// A fat point scheme on the points of a configuration.
#[derive(Clone, Debug)]
pub struct FatPointScheme {
    curves: NegCurveSet,
    input: Multiplicities,
    mults: Multiplicities,
    type_id: Option<u32>,
}

impl FatPointScheme {
    /// Points with the given (-2)-curves, in the order given.
    pub fn new(neg: &[DivisorClass], mults: Multiplicities) -> Result<Self> {
        let curves = full_neg(neg)?;
        let reduced = proximity_reduce(&mults, neg)?;
        Ok(FatPointScheme { curves, input: mults, mults: reduced, type_id: None })
    }

    /// Points of a table type, using the classes as printed in the table.
    pub fn for_type(ty: &ConfigurationType, mults: Multiplicities) -> Result<Self> {
        let mut s = Self::new(&ty.representative, mults)?;
        s.type_id = Some(ty.id);
        Ok(s)
    }

    pub fn curves(&self) -> &NegCurveSet {
        &self.curves
    }

    /// Multiplicities as given.
    pub fn input_mults(&self) -> Multiplicities {
        self.input
    }

    /// Multiplicities after proximity reduction.
    pub fn mults(&self) -> Multiplicities {
        self.mults
    }

    pub fn type_id(&self) -> Option<u32> {
        self.type_id
    }

    /// Length of the scheme, `sum m_i (m_i + 1) / 2`.
    pub fn degree(&self) -> i64 {
        self.mults.iter().map(|&m| m * (m + 1) / 2).sum()
    }

    /// Last degree computed explicitly.
    pub fn t_max(&self) -> i64 {
        self.mults.iter().sum::<i64>() + 3
    }

    pub fn class(&self, t: i64) -> DivisorClass {
        fatpoint_class(&self.mults, t)
    }
}

/// Hilbert function of `I(Z)`, explicit through `tail_from`; for `t >= tail_from`
/// `h_I(t) = C(t+2,2) - deg Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    /// `h_I(t)` for `t = 0..=tail_from`.
    pub ideal: Vec<i64>,
    pub degree: i64,
    pub tail_from: i64,
}

impl HilbertFunction {
    pub fn ideal_at(&self, t: i64) -> i64 {
        if t < 0 {
            0
        } else if t <= self.tail_from {
            self.ideal[t as usize]
        } else {
            forms_of_degree(t) - self.degree
        }
    }

    pub fn quotient_at(&self, t: i64) -> i64 {
        forms_of_degree(t) - self.ideal_at(t)
    }

    /// `h_Z(t)` for `t = 0..=tail_from`.
    pub fn quotient(&self) -> Vec<i64> {
        (0..=self.tail_from).map(|t| self.quotient_at(t)).collect()
    }
}

pub fn hilbert_ideal(s: &FatPointScheme) -> Result<HilbertFunction> {
    let t_max = s.t_max();
    let degree = s.degree();
    let values: Vec<i64> = (0..=t_max).map(|t| h0(&s.class(t), &s.curves) as i64).collect();
    let stable = |t: i64| values[t as usize] == forms_of_degree(t) - degree;
    if !(stable(t_max) && stable(t_max - 1)) {
        return Err(Error::Consistency(format!(
            "Hilbert function has not stabilized by degree {t_max}"
        )));
    }
    let mut tail_from = t_max - 1;
    while tail_from > 0 && stable(tail_from - 1) {
        tail_from -= 1;
    }
    Ok(HilbertFunction {
        ideal: values[..=tail_from as usize].to_vec(),
        degree,
        tail_from,
    })
}

/// Number of minimal generators of `I(Z)` in each degree (only nonzero entries).
pub fn generator_degrees(s: &FatPointScheme) -> Result<Vec<(i64, i64)>> {
    let line = DivisorClass::line();
    let mut out = Vec::new();
    for t in -1..=s.t_max() {
        let next = h0(&s.class(t + 1), &s.curves) as i64;
        let r = reduce_to_nef(&s.class(t), &s.curves);
        let g = if !r.effective {
            next
        } else {
            let d = r.reduced;
            let here = h0(&d, &s.curves) as i64;
            let above = h0(&(d + line), &s.curves) as i64;
            (next - above) + (above - 3 * here).max(0)
        };
        if g < 0 {
            return Err(Error::Consistency(format!("negative generator count {g} in degree {}", t + 1)));
        }
        if g > 0 {
            out.push((t + 1, g));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Shift {
    pub shift: i64,
    pub mult: i64,
}

/// Minimal free resolution `0 -> F1 -> F0 -> I(Z) -> 0`, shifts ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedResolution {
    #[serde(rename = "F0")]
    pub f0: Vec<Shift>,
    #[serde(rename = "F1")]
    pub f1: Vec<Shift>,
}

fn free_dim(module: &[Shift], t: i64) -> i64 {
    module.iter().map(|s| s.mult * forms_of_degree(t - s.shift)).sum()
}

/// `R[-9]^3 + R[-8]^3 + R[-6]`, largest shift first.
pub fn module_string(module: &[Shift]) -> String {
    if module.is_empty() {
        return "0".into();
    }
    module
        .iter()
        .rev()
        .map(|s| match s.mult {
            1 => format!("R[{}]", -s.shift),
            k => format!("R[{}]^{k}", -s.shift),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl GradedResolution {
    pub fn f0_dim(&self, t: i64) -> i64 {
        free_dim(&self.f0, t)
    }

    pub fn f1_dim(&self, t: i64) -> i64 {
        free_dim(&self.f1, t)
    }

    pub fn max_shift(&self) -> i64 {
        self.f0.iter().chain(&self.f1).map(|s| s.shift).max().unwrap_or(0)
    }

    pub fn rank(&self) -> i64 {
        self.f0.iter().map(|s| s.mult).sum::<i64>() - self.f1.iter().map(|s| s.mult).sum::<i64>()
    }

    fn mult(module: &[Shift], shift: i64) -> i64 {
        module.iter().find(|s| s.shift == shift).map_or(0, |s| s.mult)
    }

    pub fn generators_in(&self, shift: i64) -> i64 {
        Self::mult(&self.f0, shift)
    }

    pub fn syzygies_in(&self, shift: i64) -> i64 {
        Self::mult(&self.f1, shift)
    }
}

impl fmt::Display for GradedResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F1 = {}, F0 = {}", module_string(&self.f1), module_string(&self.f0))
    }
}

/// Resolution from the generator degrees and the Hilbert function.
pub fn resolution_from(generators: &[(i64, i64)], hilbert: &HilbertFunction) -> Result<GradedResolution> {
    let f0: Vec<Shift> = generators.iter().map(|&(shift, mult)| Shift { shift, mult }).collect();
    let last = f0.iter().map(|s| s.shift).max().unwrap_or(0).max(hilbert.tail_from) + 2;
    let mut f1: Vec<Shift> = Vec::new();
    for j in 0..=last {
        let syz = free_dim(&f0, j) - hilbert.ideal_at(j) - free_dim(&f1, j);
        if syz < 0 {
            return Err(Error::Consistency(format!("negative syzygy count {syz} in degree {j}")));
        }
        if syz > 0 {
            f1.push(Shift { shift: j, mult: syz });
        }
    }
    let res = GradedResolution { f0, f1 };
    for t in 0..=res.max_shift() + TAIL_WINDOW {
        if res.f0_dim(t) - res.f1_dim(t) != hilbert.ideal_at(t) {
            return Err(Error::Consistency(format!("resolution does not match h_I in degree {t}")));
        }
    }
    if res.rank() != 1 {
        return Err(Error::Consistency(format!("resolution has rank {}", res.rank())));
    }
    if let (Some(a), Some(b)) = (res.f0.first(), res.f1.first()) {
        if b.shift <= a.shift {
            return Err(Error::Consistency("resolution is not minimal".into()));
        }
    }
    Ok(res)
}

pub fn resolution(s: &FatPointScheme) -> Result<GradedResolution> {
    resolution_from(&generator_degrees(s)?, &hilbert_ideal(s)?)
}

/// Hilbert function and resolution of one scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatPointReport {
    pub type_id: Option<u32>,
    pub input_mults: Multiplicities,
    pub mults: Multiplicities,
    pub hilbert: HilbertFunction,
    pub resolution: GradedResolution,
}

pub fn analyze(s: &FatPointScheme) -> Result<FatPointReport> {
    let hilbert = hilbert_ideal(s)?;
    let resolution = resolution_from(&generator_degrees(s)?, &hilbert)?;
    Ok(FatPointReport {
        type_id: s.type_id,
        input_mults: s.input,
        mults: s.mults,
        hilbert,
        resolution,
    })
}

/// Hilbert function of `R/I` up to where it levels off, and the resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SchemeOutcome {
    pub quotient: Vec<i64>,
    #[serde(rename = "F1")]
    pub f1: Vec<(i64, i64)>,
    #[serde(rename = "F0")]
    pub f0: Vec<(i64, i64)>,
}

impl SchemeOutcome {
    fn of(report: &FatPointReport) -> Self {
        let pairs = |m: &[Shift]| m.iter().map(|s| (s.shift, s.mult)).collect();
        SchemeOutcome {
            quotient: report.hilbert.quotient(),
            f1: pairs(&report.resolution.f1),
            f0: pairs(&report.resolution.f0),
        }
    }
}

/// The named outcomes for `Z = p1 + ... + p6` and `2Z`.
struct KnownCase {
    name: &'static str,
    z: (&'static [i64], &'static [(i64, i64)], &'static [(i64, i64)]),
    z2: (&'static [i64], &'static [(i64, i64)], &'static [(i64, i64)]),
}

const Z_CONIC: (&[i64], &[(i64, i64)], &[(i64, i64)]) = (&[1, 3, 5, 6], &[(5, 1)], &[(2, 1), (3, 1)]);
const Z_GENERAL: (&[i64], &[(i64, i64)], &[(i64, i64)]) = (&[1, 3, 6], &[(4, 3)], &[(3, 4)]);
const Z2_GENERAL_H: &[i64] = &[1, 3, 6, 10, 15, 18];

const KNOWN_CASES: [KnownCase; 5] = [
    KnownCase {
        name: "1",
        z: Z_CONIC,
        z2: (&[1, 3, 6, 10, 14, 17, 18], &[(7, 1), (8, 1)], &[(4, 1), (5, 1), (6, 1)]),
    },
    KnownCase {
        name: "2(a)",
        z: Z_GENERAL,
        z2: (&[1, 3, 6, 10, 14, 18], &[(7, 4)], &[(4, 1), (6, 4)]),
    },
    KnownCase {
        name: "2(b1)",
        z: Z_GENERAL,
        z2: (Z2_GENERAL_H, &[(7, 3)], &[(5, 3), (6, 1)]),
    },
    KnownCase {
        name: "2(b2)",
        z: Z_GENERAL,
        z2: (Z2_GENERAL_H, &[(6, 1), (7, 3)], &[(5, 3), (6, 2)]),
    },
    KnownCase {
        name: "2(b3)",
        z: Z_GENERAL,
        z2: (Z2_GENERAL_H, &[(6, 2), (7, 3)], &[(5, 3), (6, 3)]),
    },
];

fn known_name(z: &SchemeOutcome, z2: &SchemeOutcome) -> Option<&'static str> {
    let same = |o: &SchemeOutcome, k: &(&[i64], &[(i64, i64)], &[(i64, i64)])| {
        o.quotient == k.0 && o.f1 == k.1 && o.f0 == k.2
    };
    KNOWN_CASES
        .iter()
        .find(|k| same(z, &k.z) && same(z2, &k.z2))
        .map(|k| k.name)
}

/// Types sharing the same outcomes for `Z` and `2Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Case {
    /// Case name such as `2(b1)`; `None` for an outcome outside the known list.
    pub name: Option<&'static str>,
    pub z: SchemeOutcome,
    pub z2: SchemeOutcome,
    pub types: Vec<u32>,
}

/// Buckets the 90 types by the outcomes for `m = (1,...,1)` and `m = (2,...,2)`.
pub fn table2() -> Result<Vec<Table2Case>> {
    let outcomes = all_types()
        .par_iter()
        .map(|ty| {
            let z = analyze(&FatPointScheme::for_type(ty, [1; N_POINTS])?)?;
            let z2 = analyze(&FatPointScheme::for_type(ty, [2; N_POINTS])?)?;
            Ok((ty.id, SchemeOutcome::of(&z), SchemeOutcome::of(&z2)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cases: Vec<Table2Case> = Vec::new();
    for (id, z, z2) in outcomes {
        match cases.iter_mut().find(|c| c.z == z && c.z2 == z2) {
            Some(c) => c.types.push(id),
            None => cases.push(Table2Case { name: known_name(&z, &z2), z, z2, types: vec![id] }),
        }
    }
    cases.sort_by_key(|c| (c.name.is_none(), c.name, c.types[0]));
    Ok(cases)
}
