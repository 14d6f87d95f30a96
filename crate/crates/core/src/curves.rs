//! Negative curves, nefness and the cohomology of divisor classes.
//!
//! Everything here works from the list `neg` of (-2)-curves alone: the full
//! set of negative curves is rebuilt from it, and `h^0` of any class is found
//! by stripping fixed components until the class is nef or visibly
//! non-effective.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{canonical_class, integer_rank, DivisorClass, N_POINTS};

/// Subsets of `0..N_POINTS` of the given size, in lexicographic order.
pub(crate) fn subsets(size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..N_POINTS {
            cur.push(i);
            go(i + 1, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, size, &mut Vec::new(), &mut out);
    out
}

/// The candidate families of negative classes on a blow-up of six
/// essentially distinct points, with their restrictions to the case of
/// nef anticanonical class (`*_p`) and to (-2)-classes (`*_pp`).
#[derive(Clone, Debug)]
pub struct CandidateFamilies {
    /// `E_i`.
    pub b: Vec<DivisorClass>,
    /// `E_i - E_{i1} - ... - E_{ir}`, `r >= 1`, `i < i1 < ... < ir`.
    pub v: Vec<DivisorClass>,
    /// `L - E_{i1} - ... - E_{ir}`, `r >= 2`.
    pub l: Vec<DivisorClass>,
    /// `2L - E_{i1} - ... - E_{ir}`, `r >= 5`.
    pub q: Vec<DivisorClass>,
    pub b_p: Vec<DivisorClass>,
    pub v_p: Vec<DivisorClass>,
    pub l_p: Vec<DivisorClass>,
    pub q_p: Vec<DivisorClass>,
    pub v_pp: Vec<DivisorClass>,
    pub l_pp: Vec<DivisorClass>,
    pub q_pp: Vec<DivisorClass>,
}

impl CandidateFamilies {
    pub fn new() -> Self {
        let b: Vec<_> = (0..N_POINTS).map(DivisorClass::exceptional).collect();

        let mut v = Vec::new();
        for i in 0..N_POINTS {
            for size in 1..N_POINTS - i {
                for tail in subsets(size) {
                    if tail.iter().all(|&j| j > i) {
                        let mut c = DivisorClass::through(0, &tail);
                        c.m[i] = 1;
                        v.push(c);
                    }
                }
            }
        }
        let l: Vec<_> = (2..=N_POINTS)
            .flat_map(subsets)
            .map(|s| DivisorClass::through(1, &s))
            .collect();
        let q: Vec<_> = (5..=N_POINTS)
            .flat_map(subsets)
            .map(|s| DivisorClass::through(2, &s))
            .collect();

        let v_p: Vec<_> = subsets(2).iter().map(|s| DivisorClass::root(s[0], s[1])).collect();
        let l_pp: Vec<_> = subsets(3).iter().map(|s| DivisorClass::through(1, s)).collect();
        let l_p: Vec<_> = subsets(2)
            .iter()
            .map(|s| DivisorClass::through(1, s))
            .chain(l_pp.iter().copied())
            .collect();
        let q_pp = vec![DivisorClass::through(2, &[0, 1, 2, 3, 4, 5])];

        CandidateFamilies {
            b_p: b.clone(),
            q_p: q.clone(),
            v_pp: v_p.clone(),
            b,
            v,
            l,
            q,
            v_p,
            l_p,
            l_pp,
            q_pp,
        }
    }
}

impl Default for CandidateFamilies {
    fn default() -> Self {
        Self::new()
    }
}

/// What shape of (-2)-class a `neg` entry is.
fn check_minus_two_class(c: &DivisorClass) -> Result<()> {
    let bad = |reason: &str| Error::InvalidNegClass { class: *c, reason: reason.into() };
    if c.self_intersection() != -2 {
        return Err(bad("self-intersection is not -2"));
    }
    if c.intersect(&canonical_class()) != 0 {
        return Err(bad("not orthogonal to K"));
    }
    let minus = c.m.iter().filter(|&&x| x == -1).count();
    let plus = c.m.iter().filter(|&&x| x == 1).count();
    let ok = match c.d {
        0 => minus == 1 && plus == 1,
        1 => minus == 3 && plus == 0,
        2 => minus == 6,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(bad("not of the form Ei-Ej, L-Ei-Ej-Ek or 2L-E1-...-E6"))
    }
}

/// A class that meets every negative curve of the set positively: `16L - sum w_i E_i`
/// where the weights `6, 5, ..., 1` follow a topological order of the
/// infinitely-near relation. For sets with `E_i - E_j` only when `i < j`
/// this is `16L - 6E1 - 5E2 - 4E3 - 3E4 - 2E5 - E6`.
fn potential_class(neg: &[DivisorClass]) -> Result<DivisorClass> {
    let mut edges = Vec::new();
    for c in neg.iter().filter(|c| c.d == 0) {
        let hi = c.m.iter().position(|&x| x == 1).unwrap();
        let lo = c.m.iter().position(|&x| x == -1).unwrap();
        edges.push((hi, lo));
    }
    let mut placed = [false; N_POINTS];
    let mut w = [0i64; N_POINTS];
    for k in 0..N_POINTS {
        let next = (0..N_POINTS).find(|&i| {
            !placed[i] && edges.iter().all(|&(a, b)| b != i || placed[a])
        });
        let Some(i) = next else {
            return Err(Error::LinearlyDependent);
        };
        placed[i] = true;
        w[i] = (N_POINTS - k) as i64;
    }
    Ok(DivisorClass::new(16, w.map(|x| -x)))
}

/// The (-2)-curves `neg` of a surface together with the full list of
/// negative curves they determine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegCurveSet {
    neg: Vec<DivisorClass>,
    all: Vec<DivisorClass>,
    #[serde(skip)]
    potential: DivisorClass,
}

impl NegCurveSet {
    /// The (-2)-curves, in the order given.
    pub fn neg(&self) -> &[DivisorClass] {
        &self.neg
    }

    /// All negative curves: `neg` first, then the (-1)-curves.
    pub fn all(&self) -> &[DivisorClass] {
        &self.all
    }

    /// The (-1)-curves.
    pub fn exceptional_curves(&self) -> &[DivisorClass] {
        &self.all[self.neg.len()..]
    }

    /// A class positive on every negative curve; used as a termination potential.
    pub fn potential(&self) -> DivisorClass {
        self.potential
    }

    /// The same set with negative curves scanned in a different order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.all.len());
        NegCurveSet {
            neg: self.neg.clone(),
            all: order.iter().map(|&i| self.all[i]).collect(),
            potential: self.potential,
        }
    }
}

/// Rebuilds the full set of negative curves from the (-2)-curves.
pub fn full_neg(neg: &[DivisorClass]) -> Result<NegCurveSet> {
    for c in neg {
        check_minus_two_class(c)?;
    }
    for (i, a) in neg.iter().enumerate() {
        for b in &neg[i + 1..] {
            let product = a.intersect(b);
            if product < 0 || a == b {
                return Err(Error::NotPairwiseNonnegative { a: *a, b: *b, product });
            }
        }
    }
    if integer_rank(neg) != neg.len() {
        return Err(Error::LinearlyDependent);
    }
    let potential = potential_class(neg)?;

    let fam = CandidateFamilies::new();
    let mut all = neg.to_vec();
    all.extend(
        fam.b
            .iter()
            .chain(&fam.l)
            .chain(&fam.q)
            .filter(|c| c.self_intersection() == -1)
            .filter(|c| neg.iter().all(|d| c.intersect(d) >= 0)),
    );
    if let Some(c) = all.iter().find(|c| potential.intersect(c) <= 0) {
        return Err(Error::Consistency(format!("potential {potential} is not positive on {c}")));
    }
    Ok(NegCurveSet { neg: neg.to_vec(), all, potential })
}

/// `F` is nef iff it meets every negative curve nonnegatively.
pub fn is_nef(f: &DivisorClass, curves: &NegCurveSet) -> bool {
    curves.all.iter().all(|c| f.intersect(c) >= 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub reduced: DivisorClass,
    /// Each subtracted curve with its multiplicity, in order of first use.
    pub subtractions: Vec<(DivisorClass, u32)>,
    pub effective: bool,
}

impl ReductionResult {
    pub fn total_subtracted(&self) -> DivisorClass {
        self.subtractions
            .iter()
            .fold(DivisorClass::zero(), |acc, (c, k)| acc + i64::from(*k) * *c)
    }
}

/// Strips fixed components: while some negative curve `C` has `D.C < 0`,
/// replace `D` by `D - C`. Stops with a nef class, or as soon as `D` is
/// visibly not effective (negative degree, or negative against the
/// potential class).
pub fn reduce_to_nef(f: &DivisorClass, curves: &NegCurveSet) -> ReductionResult {
    let potential = curves.potential;
    let guard = 1 + potential.intersect(f).max(0);
    let mut d = *f;
    let mut subtractions: Vec<(DivisorClass, u32)> = Vec::new();
    let mut steps = 0;
    loop {
        if d.degree() < 0 || potential.intersect(&d) < 0 {
            return ReductionResult { reduced: d, subtractions, effective: false };
        }
        let Some(c) = curves.all.iter().find(|c| d.intersect(c) < 0) else {
            return ReductionResult { reduced: d, subtractions, effective: true };
        };
        steps += 1;
        assert!(steps <= guard, "reduction of {f} did not terminate within {guard} steps");
        d = d - *c;
        match subtractions.iter_mut().find(|(s, _)| s == c) {
            Some((_, k)) => *k += 1,
            None => subtractions.push((*c, 1)),
        }
    }
}

/// `(F^2 - K.F)/2 + 1`.
pub fn euler_characteristic(f: &DivisorClass) -> i64 {
    let twice = f.self_intersection() - canonical_class().intersect(f);
    assert!(twice % 2 == 0, "F^2 - K.F is odd for {f}");
    twice / 2 + 1
}

pub fn h0(f: &DivisorClass, curves: &NegCurveSet) -> u64 {
    let r = reduce_to_nef(f, curves);
    if !r.effective {
        return 0;
    }
    let chi = euler_characteristic(&r.reduced);
    assert!(chi >= 1, "nef class {} has h0 = {chi}", r.reduced);
    chi as u64
}

/// `h^2(F) = h^0(K - F)`.
pub fn h2(f: &DivisorClass, curves: &NegCurveSet) -> u64 {
    h0(&(canonical_class() - *f), curves)
}

/// `h^1(F) = h^0(F) + h^2(F) - chi(F)`.
pub fn h1(f: &DivisorClass, curves: &NegCurveSet) -> u64 {
    let v = h0(f, curves) as i64 + h2(f, curves) as i64 - euler_characteristic(f);
    assert!(v >= 0, "negative h1 for {f}");
    v as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::anticanonical_class;

    fn l() -> DivisorClass {
        DivisorClass::line()
    }
    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i - 1)
    }
    fn general() -> NegCurveSet {
        full_neg(&[]).unwrap()
    }

    #[test]
    fn family_sizes() {
        let f = CandidateFamilies::new();
        assert_eq!(f.b.len(), 6);
        assert_eq!(f.v.len(), 57);
        assert_eq!(f.l.len(), 57);
        assert_eq!(f.q.len(), 7);
        assert_eq!(f.v_p.len(), 15);
        assert_eq!(f.l_p.len(), 35);
        assert_eq!(f.v_pp.len(), 15);
        assert_eq!(f.l_pp.len(), 20);
        assert_eq!(f.q_pp.len(), 1);
        let k = canonical_class();
        for c in f.v_pp.iter().chain(&f.l_pp).chain(&f.q_pp) {
            assert_eq!(c.self_intersection(), -2);
            assert_eq!(c.intersect(&k), 0);
        }
    }

    #[test]
    fn potential_positive_on_nef_families() {
        let f = CandidateFamilies::new();
        let a = potential_class(&[]).unwrap();
        assert_eq!(a, DivisorClass::new(16, [-6, -5, -4, -3, -2, -1]));
        for c in f.b_p.iter().chain(&f.v_p).chain(&f.l_p).chain(&f.q_p) {
            assert!(a.intersect(c) > 0, "{c}");
        }
        // the weight 14 fails on L-E1-E2-E3
        let a14 = DivisorClass::new(14, [-6, -5, -4, -3, -2, -1]);
        assert_eq!(a14.intersect(&DivisorClass::through(1, &[0, 1, 2])), -1);
    }

    #[test]
    fn twenty_seven_lines() {
        let n = general();
        assert_eq!(n.all().len(), 27);
        assert_eq!(n.all()[..6], (1..=6).map(e).collect::<Vec<_>>()[..]);
        for c in n.all() {
            assert_eq!(c.self_intersection(), -1);
            assert_eq!(anticanonical_class().intersect(c), 1);
        }
    }

    #[test]
    fn full_neg_filters() {
        let n = full_neg(&[e(1) - e(2)]).unwrap();
        assert!(!n.all().contains(&e(1)));
        assert!(n.all().contains(&e(2)));
        assert!(n.all().contains(&(l() - e(1) - e(2))));

        let conic = DivisorClass::through(2, &[0, 1, 2, 3, 4, 5]);
        let n = full_neg(&[conic]).unwrap();
        assert!(n.all().iter().all(|c| c.d != 2 || *c == conic));
        assert_eq!(n.all().len(), 1 + 6 + 15);
    }

    #[test]
    fn full_neg_rejects_bad_input() {
        assert!(matches!(
            full_neg(&[e(1) - e(2), e(1) - e(3)]),
            Err(Error::NotPairwiseNonnegative { .. })
        ));
        assert!(matches!(full_neg(&[l() - e(1) - e(2)]), Err(Error::InvalidNegClass { .. })));
        assert!(matches!(
            full_neg(&[-(l() - e(1) - e(2) - e(3))]),
            Err(Error::InvalidNegClass { .. })
        ));
        assert!(matches!(
            full_neg(&[e(1) - e(2), e(2) - e(3), e(3) - e(1)]),
            Err(Error::LinearlyDependent)
        ));
    }

    #[test]
    fn nef_examples() {
        for neg in [vec![], vec![e(1) - e(2)], vec![DivisorClass::through(1, &[0, 1, 2])]] {
            let n = full_neg(&neg).unwrap();
            assert!(is_nef(&anticanonical_class(), &n));
            assert!(is_nef(&l(), &n));
        }
        assert!(!is_nef(&(l() - e(1) - e(2) - e(3)), &general()));
    }

    #[test]
    fn reduction_examples() {
        let n = full_neg(&[e(1) - e(2)]).unwrap();
        let r = reduce_to_nef(&(l() - e(1) - e(2)), &n);
        assert_eq!(r.reduced, DivisorClass::zero());
        assert_eq!(r.subtractions, vec![(l() - e(1) - e(2), 1)]);
        assert!(r.effective);

        let r = reduce_to_nef(&anticanonical_class(), &n);
        assert_eq!(r.reduced, anticanonical_class());
        assert!(r.subtractions.is_empty());

        let f = l() - 3 * e(1);
        let r = reduce_to_nef(&f, &general());
        assert!(!r.effective);
        assert_eq!(r.reduced + r.total_subtracted(), f);
    }

    #[test]
    fn cohomology_examples() {
        let g = general();
        for t in 0..8i64 {
            assert_eq!(h0(&(t * l()), &g) as i64, (t + 2) * (t + 1) / 2);
        }
        assert_eq!(h0(&(2 * l() - e(1) - e(2)), &g), 4);
        let n = full_neg(&[e(1) - e(2)]).unwrap();
        assert_eq!(h0(&(l() - e(1) - e(2)), &n), 1);

        assert_eq!(euler_characteristic(&DivisorClass::zero()), 1);
        assert_eq!(euler_characteristic(&canonical_class()), 1);
        assert_eq!(euler_characteristic(&l()), 3);

        assert_eq!(h2(&DivisorClass::zero(), &g), 0);
        assert_eq!(h2(&canonical_class(), &g), 1);
        assert_eq!(h2(&(l() - 2 * e(1)), &g), 0);

        assert_eq!(h1(&DivisorClass::zero(), &g), 0);
        assert_eq!(h1(&-(e(1) - e(2)), &n), 0);
        assert_eq!(h0(&-(e(1) - e(2)), &n), 0);
        assert_eq!(euler_characteristic(&-(e(1) - e(2))), 0);
        // the doubled line through two points: chi = 0 but h0 = 1
        let f = 2 * l() - 2 * e(1) - 2 * e(2);
        assert_eq!(euler_characteristic(&f), 0);
        assert_eq!(h0(&f, &g), 1);
        assert_eq!(h1(&f, &g), 1);
    }
}
