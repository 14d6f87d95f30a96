//! The divisor class group of the blow-up of the plane at six points.
//!
//! Classes are written in the exceptional configuration `L, E1, ..., E6`,
//! which is orthogonal for the intersection form with `L^2 = 1` and
//! `Ei^2 = -1`. All arithmetic is checked; overflow is a fatal error.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of blown-up points. Fixed throughout the crate.
pub const N_POINTS: usize = 6;

/// A permutation of the point indices `0..6`: index `i` is sent to `perm[i]`.
pub type Permutation = [usize; N_POINTS];

pub const IDENTITY: Permutation = [0, 1, 2, 3, 4, 5];

/// An integer class `d L + m1 E1 + ... + m6 E6`.
///
/// Coefficients are stored literally, so `L - E1 - E2` is `(1; -1, -1, 0, 0, 0, 0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivisorClass {
    pub d: i64,
    pub m: [i64; N_POINTS],
}

fn overflow() -> ! {
    panic!("divisor class arithmetic overflowed")
}

impl DivisorClass {
    pub const fn new(d: i64, m: [i64; N_POINTS]) -> Self {
        DivisorClass { d, m }
    }

    pub const fn zero() -> Self {
        DivisorClass { d: 0, m: [0; N_POINTS] }
    }

    /// The pullback `L` of a line.
    pub const fn line() -> Self {
        DivisorClass { d: 1, m: [0; N_POINTS] }
    }

    /// The exceptional class `E_{i+1}` (zero-based index).
    pub fn exceptional(i: usize) -> Self {
        let mut m = [0; N_POINTS];
        m[i] = 1;
        DivisorClass { d: 0, m }
    }

    /// `d L - sum_{i in points} E_i` for zero-based point indices.
    pub fn through(d: i64, points: &[usize]) -> Self {
        let mut m = [0; N_POINTS];
        for &i in points {
            m[i] -= 1;
        }
        DivisorClass { d, m }
    }

    /// `E_i - E_j` for zero-based indices.
    pub fn root(i: usize, j: usize) -> Self {
        let mut m = [0; N_POINTS];
        m[i] += 1;
        m[j] -= 1;
        DivisorClass { d: 0, m }
    }

    pub fn from_array(v: [i64; N_POINTS + 1]) -> Self {
        let mut m = [0; N_POINTS];
        m.copy_from_slice(&v[1..]);
        DivisorClass { d: v[0], m }
    }

    pub fn to_array(&self) -> [i64; N_POINTS + 1] {
        let mut v = [0; N_POINTS + 1];
        v[0] = self.d;
        v[1..].copy_from_slice(&self.m);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.m.iter().all(|&x| x == 0)
    }

    /// Intersection product, or `None` on overflow.
    pub fn checked_intersect(&self, other: &Self) -> Option<i64> {
        let mut acc = self.d.checked_mul(other.d)?;
        for (a, b) in self.m.iter().zip(&other.m) {
            acc = acc.checked_sub(a.checked_mul(*b)?)?;
        }
        Some(acc)
    }

    /// Intersection product `d d' - sum m_i m'_i`.
    pub fn intersect(&self, other: &Self) -> i64 {
        self.checked_intersect(other).unwrap_or_else(|| overflow())
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self)
    }

    /// Degree, i.e. the intersection with `L`.
    pub fn degree(&self) -> i64 {
        self.d
    }

    /// Relabels the points: the coefficient of `E_i` moves to `E_{perm[i]}`.
    pub fn permuted(&self, perm: &Permutation) -> Self {
        let mut m = [0; N_POINTS];
        for (i, &c) in self.m.iter().enumerate() {
            m[perm[i]] = c;
        }
        DivisorClass { d: self.d, m }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let mut m = [0; N_POINTS];
        for i in 0..N_POINTS {
            m[i] = self.m[i].checked_add(other.m[i])?;
        }
        Some(DivisorClass { d: self.d.checked_add(other.d)?, m })
    }

    pub fn checked_scale(&self, k: i64) -> Option<Self> {
        let mut m = [0; N_POINTS];
        for i in 0..N_POINTS {
            m[i] = self.m[i].checked_mul(k)?;
        }
        Some(DivisorClass { d: self.d.checked_mul(k)?, m })
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).unwrap_or_else(|| overflow())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> Self {
        self.checked_scale(-1).unwrap_or_else(|| overflow())
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.checked_scale(self).unwrap_or_else(|| overflow())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, sym: &str| -> fmt::Result {
            if c == 0 {
                return Ok(());
            }
            let sign = if c < 0 { "-" } else if wrote { "+" } else { "" };
            wrote = true;
            match c.unsigned_abs() {
                1 => write!(f, "{sign}{sym}"),
                k => write!(f, "{sign}{k}{sym}"),
            }
        };
        term(f, self.d, "L")?;
        for (i, &c) in self.m.iter().enumerate() {
            term(f, c, &format!("E{}", i + 1))?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The canonical class `K = -3L + E1 + ... + E6`.
pub fn canonical_class() -> DivisorClass {
    DivisorClass::new(-3, [1; N_POINTS])
}

/// `-K = 3L - E1 - ... - E6`.
pub fn anticanonical_class() -> DivisorClass {
    -canonical_class()
}

/// Gram matrix of the basis `L, E1, ..., E6`.
pub fn gram_matrix() -> [[i64; N_POINTS + 1]; N_POINTS + 1] {
    let basis: Vec<DivisorClass> = std::iter::once(DivisorClass::line())
        .chain((0..N_POINTS).map(DivisorClass::exceptional))
        .collect();
    let mut g = [[0; N_POINTS + 1]; N_POINTS + 1];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            g[i][j] = a.intersect(b);
        }
    }
    g
}

/// 0/1 incidence matrix of a combinatorial geometry: one row per maximal
/// collinear subset of at least three of the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearityMatrix {
    rows: Vec<[u8; N_POINTS]>,
}

impl CollinearityMatrix {
    pub fn new(rows: Vec<[u8; N_POINTS]>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.iter().any(|&x| x > 1) {
                return Err(Error::InvalidMatrix {
                    rows: vec![r],
                    reason: "entries must be 0 or 1".into(),
                });
            }
            let sum: u32 = row.iter().map(|&x| u32::from(x)).sum();
            if sum < 3 {
                return Err(Error::InvalidMatrix {
                    rows: vec![r],
                    reason: format!("row sum {sum} is less than 3"),
                });
            }
        }
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                let dot: u32 = rows[a]
                    .iter()
                    .zip(&rows[b])
                    .map(|(x, y)| u32::from(x * y))
                    .sum();
                if dot > 1 {
                    return Err(Error::InvalidMatrix {
                        rows: vec![a, b],
                        reason: format!("rows share {dot} points"),
                    });
                }
            }
        }
        Ok(CollinearityMatrix { rows })
    }

    pub fn rows(&self) -> &[[u8; N_POINTS]] {
        &self.rows
    }

    /// Classes of the proper transforms of the lines: row `b` maps to
    /// `L - sum b_i E_i`.
    pub fn line_classes(&self) -> Vec<DivisorClass> {
        self.rows
            .iter()
            .map(|row| {
                let mut m = [0; N_POINTS];
                for (i, &b) in row.iter().enumerate() {
                    m[i] = -i64::from(b);
                }
                DivisorClass::new(1, m)
            })
            .collect()
    }
}

/// Validates `rows` as a collinearity matrix and returns its line classes.
pub fn from_collinearity_matrix(rows: &[[u8; N_POINTS]]) -> Result<Vec<DivisorClass>> {
    Ok(CollinearityMatrix::new(rows.to_vec())?.line_classes())
}

/// Rank over the rationals of a list of integer vectors (fraction-free elimination).
pub fn integer_rank(classes: &[DivisorClass]) -> usize {
    let mut rows: Vec<Vec<i128>> = classes
        .iter()
        .map(|c| c.to_array().iter().map(|&x| i128::from(x)).collect())
        .collect();
    let ncols = N_POINTS + 1;
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            if rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                for c in 0..ncols {
                    rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
