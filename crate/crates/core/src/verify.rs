//! Consistency checks: the bookkeeping `q, l, q*, l*` for the multiplication
//! map `mu_F : H^0(F) x H^0(L) -> H^0(F+L)`, sampled over nef classes, and a
//! suite of global invariants.
//!
//! Maximal rank of `mu_F` is not checked directly (that needs coordinates); only
//! its compatibility with the bounds `l <= dim ker <= q + l`, `dim cok <= q* + l*`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{full_neg, h0, h1, is_nef, reduce_to_nef, NegCurveSet};
use crate::error::{Error, Result};
use crate::fatpoints::{analyze, forms_of_degree, table2, FatPointReport, FatPointScheme, Multiplicities};
use crate::lattice::{anticanonical_class, canonical_class, gram_matrix, DivisorClass, N_POINTS};
use crate::typeenum::{all_permutations, all_types, table1_reconciliation, ConfigurationType};

pub const SAMPLE_COUNT: usize = 200;
pub const SAMPLE_MAX_DEGREE: i64 = 12;
pub const DEFAULT_SEED: u64 = 0;

/// The nonempty graphs that occur.
pub const EXPECTED_GRAPHS: [&str; 20] = [
    "A_1", "2A_1", "A_2", "3A_1", "A_1A_2", "A_3", "4A_1", "2A_1A_2", "A_1A_3", "2A_2", "A_4", "D_4", "A_12A_2",
    "2A_1A_3", "A_1A_4", "A_5", "D_5", "3A_2", "A_1A_5", "E_6",
];

/// Expected type ids for each named outcome of `Z` and `2Z`.
pub const EXPECTED_TABLE2: [(&str, &[u32]); 5] = [
    (
        "1",
        &[4, 8, 12, 16, 25, 26, 30, 33, 37, 42, 47, 48, 50, 53, 58, 61, 64, 66, 70, 72, 76, 78, 81, 83, 85, 88, 89, 90],
    ),
    ("2(a)", &[34, 68, 87]),
    (
        "2(b1)",
        &[
            1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 18, 19, 20, 21, 22, 27, 28, 31, 35, 36, 38, 43, 44, 49, 51, 54, 57, 59,
            62, 73, 74, 79,
        ],
    ),
    ("2(b2)", &[9, 15, 23, 24, 29, 32, 39, 40, 46, 52, 55, 56, 60, 63, 67, 69, 71, 82, 84]),
    ("2(b3)", &[17, 41, 45, 65, 75, 77, 80, 86]),
];

/// Independent stream per type.
pub fn type_rng(seed: u64, type_id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(type_id))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuStats {
    pub f: DivisorClass,
    /// 0-based index of the `E_j` used for `q` and `l`.
    pub j: usize,
    pub q: u64,
    pub l: u64,
    pub qstar: u64,
    pub lstar: u64,
    pub h0f: u64,
    pub h0fl: u64,
    /// `dim ker mu_F` if `mu_F` has maximal rank.
    pub ker_pred: u64,
    /// `dim cok mu_F` if `mu_F` has maximal rank.
    pub cok_pred: u64,
}

/// Indices `j` such that `p_j` is not infinitely near another point.
pub fn valid_indices(curves: &NegCurveSet) -> Vec<usize> {
    (0..N_POINTS)
        .filter(|&j| !curves.neg().iter().any(|c| c.d == 0 && c.m[j] == -1))
        .collect()
}

pub fn mu_stats(f: &DivisorClass, curves: &NegCurveSet) -> Result<MuStats> {
    mu_stats_at(f, curves, 0)
}

pub fn mu_stats_at(f: &DivisorClass, curves: &NegCurveSet, j: usize) -> Result<MuStats> {
    if !is_nef(f, curves) {
        return Err(Error::NotNef(*f));
    }
    let e = DivisorClass::exceptional(j);
    let pencil = DivisorClass::line() - e;
    let h0f = h0(f, curves);
    let h0fl = h0(&(*f + DivisorClass::line()), curves);
    Ok(MuStats {
        f: *f,
        j,
        q: h0(&(*f - e), curves),
        l: h0(&(*f - pencil), curves),
        qstar: h1(&(*f - e), curves),
        lstar: h1(&(*f - pencil), curves),
        h0f,
        h0fl,
        ker_pred: (3 * h0f).saturating_sub(h0fl),
        cok_pred: h0fl.saturating_sub(3 * h0f),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsCheck {
    pub stats: MuStats,
    pub kernel_lower: bool,
    pub kernel_upper: bool,
    pub cokernel: bool,
    pub identity: bool,
}

impl BoundsCheck {
    pub fn passed(&self) -> bool {
        self.kernel_lower && self.kernel_upper && self.cokernel && self.identity
    }
}

fn bounds_for(stats: MuStats) -> BoundsCheck {
    let s = &stats;
    let signed = |x: u64| x as i64;
    BoundsCheck {
        kernel_lower: s.l <= s.ker_pred,
        kernel_upper: s.ker_pred <= s.q + s.l,
        cokernel: s.cok_pred <= s.qstar + s.lstar,
        identity: (signed(s.lstar) - signed(s.l)) + (signed(s.qstar) - signed(s.q))
            == signed(s.h0fl) - 3 * signed(s.h0f),
        stats,
    }
}

/// Bounds and the exact identity for `F`, once for each valid `E_j`.
pub fn check_lemma_bounds(f: &DivisorClass, curves: &NegCurveSet) -> Result<Vec<BoundsCheck>> {
    valid_indices(curves)
        .into_iter()
        .map(|j| mu_stats_at(f, curves, j).map(bounds_for))
        .collect()
}

/// Up to `count` distinct nef classes `tL - a1 E1 - ... - a6 E6` with
/// `0 <= a_i <= t <= 12`, always starting with `0`, `L`, `-K` and
/// `5L - 2(E1+...+E6)` when nef.
pub fn sample_nef(curves: &NegCurveSet, count: usize, seed: u64) -> Vec<DivisorClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |c: DivisorClass, out: &mut Vec<DivisorClass>| {
        if out.len() < count && is_nef(&c, curves) && seen.insert(c) {
            out.push(c);
        }
    };
    for c in [
        DivisorClass::zero(),
        DivisorClass::line(),
        anticanonical_class(),
        DivisorClass::new(5, [-2; N_POINTS]),
    ] {
        push(c, &mut out);
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count {
        attempts += 1;
        let t = rng.gen_range(0..=SAMPLE_MAX_DEGREE);
        // coefficients one at a time, keeping the partial class nef when possible
        let mut m = [0; N_POINTS];
        for i in 0..N_POINTS {
            let feasible: Vec<i64> = (0..=t)
                .filter(|&a| {
                    m[i] = -a;
                    is_nef(&DivisorClass::new(t, m), curves)
                })
                .collect();
            m[i] = -feasible.choose(&mut rng).copied().unwrap_or_else(|| rng.gen_range(0..=t));
        }
        push(DivisorClass::new(t, m), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(name: &'static str, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => CheckOutcome { name, passed: true, detail },
            Err(detail) => CheckOutcome { name, passed: false, detail },
        }
    }
}

fn fail<T>(e: Error) -> Result<T, String> {
    Err(e.to_string())
}

pub fn check_lattice_signature() -> Result<String, String> {
    let g = gram_matrix();
    let diag_ok = (0..7).all(|i| (0..7).all(|j| g[i][j] == if i != j { 0 } else if i == 0 { 1 } else { -1 }));
    let k = canonical_class();
    if !diag_ok || k.self_intersection() != 3 {
        return Err(format!("Gram matrix {g:?}, K^2 = {}", k.self_intersection()));
    }
    Ok("diag(1,-1,-1,-1,-1,-1,-1), K^2 = 3".into())
}

pub fn check_27_lines() -> Result<String, String> {
    let n = full_neg(&[]).map_err(|e| e.to_string())?.all().len();
    if n == 27 {
        Ok("27 (-1)-curves".into())
    } else {
        Err(format!("{n} (-1)-curves"))
    }
}

pub fn check_type_count() -> Result<String, String> {
    let r = table1_reconciliation().map_err(|e| e.to_string())?;
    let summary = format!(
        "{} orbits for {} rows; rows sharing an orbit: {:?}; orbits without a row: {:?}; rows not enumerated: {:?}",
        r.orbit_count, r.row_count, r.shared_rows, r.missing_orbits, r.unenumerated_rows
    );
    if r.is_exact() {
        Ok(summary)
    } else {
        Err(summary)
    }
}

pub fn check_graph_torsion() -> Result<String, String> {
    let mut by_graph: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for t in all_types() {
        by_graph.entry(&t.graph.name).or_default().insert(t.torsion.to_string());
    }
    let bad: Vec<String> = by_graph
        .iter()
        .filter(|(_, ts)| ts.len() > 1)
        .map(|(g, ts)| format!("{g}: {ts:?}"))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} graphs, each with one torsion group", by_graph.len()))
    } else {
        Err(bad.join("; "))
    }
}

pub fn check_graph_census() -> Result<String, String> {
    let found: BTreeSet<&str> = all_types().iter().map(|t| t.graph.name.as_str()).filter(|g| !g.is_empty()).collect();
    let expected: BTreeSet<&str> = EXPECTED_GRAPHS.into_iter().collect();
    if found == expected {
        Ok(format!("{} graphs", found.len()))
    } else {
        Err(format!(
            "unexpected {:?}, absent {:?}",
            found.difference(&expected).collect::<Vec<_>>(),
            expected.difference(&found).collect::<Vec<_>>()
        ))
    }
}

/// Duality `h_I + h_Z = C(t+2,2)` with `h_Z(t) = deg Z - h^1(F(Z,t))`,
/// monotonicity of `h_Z`, and the resolution identities.
pub fn check_scheme(s: &FatPointScheme, report: &FatPointReport) -> Result<(), String> {
    let h = &report.hilbert;
    let r = &report.resolution;
    let top = r.max_shift() + 5;
    let mut prev = 0;
    for t in 0..=top.max(h.tail_from + 2) {
        let hz = h.degree - h1(&s.class(t), s.curves()) as i64;
        if h.ideal_at(t) + hz != forms_of_degree(t) {
            return Err(format!("duality fails at t = {t} for m = {:?}", s.mults()));
        }
        if hz < prev || hz > h.degree {
            return Err(format!("h_Z not nondecreasing up to deg Z at t = {t} for m = {:?}", s.mults()));
        }
        prev = hz;
        if r.f0_dim(t) - r.f1_dim(t) != h.ideal_at(t) {
            return Err(format!("resolution dimension fails at t = {t} for m = {:?}", s.mults()));
        }
    }
    if prev != h.degree {
        return Err(format!("h_Z does not reach deg Z for m = {:?}", s.mults()));
    }
    if r.rank() != 1 {
        return Err(format!("resolution rank {} for m = {:?}", r.rank(), s.mults()));
    }
    Ok(())
}

fn random_mults(rng: &mut ChaCha8Rng, max: i64) -> Multiplicities {
    std::array::from_fn(|_| rng.gen_range(0..=max))
}

pub fn check_hilbert_and_resolutions(seed: u64) -> Result<String, String> {
    let n: usize = all_types()
        .par_iter()
        .map(|ty| {
            let mut rng = type_rng(seed, ty.id);
            let mut mults = vec![[1; N_POINTS], [2; N_POINTS]];
            mults.extend((0..3).map(|_| random_mults(&mut rng, 4)));
            for m in &mults {
                let s = FatPointScheme::for_type(ty, *m).or_else(fail)?;
                let report = analyze(&s).or_else(fail)?;
                check_scheme(&s, &report).map_err(|e| format!("type {}: {e}", ty.id))?;
            }
            Ok(mults.len())
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{n} schemes"))
}

pub fn check_table2() -> Result<String, String> {
    let cases = table2().map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    for c in &cases {
        match c.name {
            None => problems.push(format!("types {:?} have an unlisted outcome", c.types)),
            Some(name) => {
                let expected = EXPECTED_TABLE2.iter().find(|(n, _)| *n == name).map(|(_, ids)| *ids).unwrap_or(&[]);
                let got: BTreeSet<u32> = c.types.iter().copied().collect();
                let want: BTreeSet<u32> = expected.iter().copied().collect();
                let extra: Vec<_> = got.difference(&want).collect();
                let absent: Vec<_> = want.difference(&got).collect();
                if !extra.is_empty() || !absent.is_empty() {
                    problems.push(format!("case {name}: computed but not listed {extra:?}, listed but not computed {absent:?}"));
                }
            }
        }
    }
    for (name, _) in EXPECTED_TABLE2 {
        if !cases.iter().any(|c| c.name == Some(name)) {
            problems.push(format!("case {name} does not occur"));
        }
    }
    if problems.is_empty() {
        Ok(format!("{} cases", cases.len()))
    } else {
        Err(problems.join("; "))
    }
}

/// Lemma bounds over `SAMPLE_COUNT` sampled nef classes of every type.
pub fn check_lemma_samples(seed: u64) -> Result<String, String> {
    let results = all_types()
        .par_iter()
        .map(|ty| {
            let curves = full_neg(&ty.representative).or_else(fail)?;
            let sample = sample_nef(&curves, SAMPLE_COUNT, type_rng(seed, ty.id).gen());
            if sample.len() < SAMPLE_COUNT {
                return Err(format!("type {}: only {} nef classes sampled", ty.id, sample.len()));
            }
            let mut checks = 0;
            for f in &sample {
                for b in check_lemma_bounds(f, &curves).or_else(fail)? {
                    if !b.passed() {
                        return Err(format!("type {}: {:?}", ty.id, b));
                    }
                    checks += 1;
                }
            }
            Ok(checks)
        })
        .collect::<Result<Vec<usize>, String>>()?;
    Ok(format!("{} classes, {} checks", SAMPLE_COUNT * results.len(), results.iter().sum::<usize>()))
}

/// For the single (-2)-curve `E1-E2`, `F = 2(5L-2(E1+...+E6)) - (2L-E1-...-E5)`
/// has `q* + l* = 0` for some valid `E_j`, so `mu_F` is onto.
pub fn check_targeted_surjectivity() -> Result<String, String> {
    let curves = full_neg(&[DivisorClass::root(0, 1)]).or_else(fail)?;
    let h = 2 * DivisorClass::new(5, [-2; N_POINTS]);
    let c = DivisorClass::new(2, [-1, -1, -1, -1, -1, 0]);
    let f = h - c;
    let mut sums = Vec::new();
    for j in valid_indices(&curves) {
        let s = mu_stats_at(&f, &curves, j).or_else(fail)?;
        if s.qstar + s.lstar == 0 {
            return Ok(format!("F = {f}: q* = l* = 0 with E{}", j + 1));
        }
        sums.push(format!("E{}: {}", j + 1, s.qstar + s.lstar));
    }
    Err(format!("F = {f}: q* + l* by index {}", sums.join(", ")))
}

/// For `F = 5L-2(E1+...+E6)` and the single (-2)-curve `E1-E2`: `l(3F) > 0` and
/// `l*(iF) > 0` for `i = 1..=6`.
pub fn check_ad_hoc_class() -> Result<String, String> {
    let curves = full_neg(&[DivisorClass::root(0, 1)]).or_else(fail)?;
    let f = DivisorClass::new(5, [-2; N_POINTS]);
    let s3 = mu_stats(&(3 * f), &curves).or_else(fail)?;
    if s3.l == 0 {
        return Err(format!("l(3F) = 0: {s3:?}"));
    }
    for i in 1..=6 {
        let s = mu_stats(&(i * f), &curves).or_else(fail)?;
        if s.lstar == 0 {
            return Err(format!("l*({i}F) = 0"));
        }
    }
    Ok(format!("l(3F) = {}", s3.l))
}

fn permute_mults(m: &Multiplicities, perm: &[usize; N_POINTS]) -> Multiplicities {
    let mut out = [0; N_POINTS];
    for i in 0..N_POINTS {
        out[perm[i]] = m[i];
    }
    out
}

/// Relabeling the points together with the multiplicities leaves the Hilbert
/// function and the resolution unchanged.
pub fn check_permutation_equivariance(seed: u64, trials: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = all_types();
    for _ in 0..trials {
        let ty: &ConfigurationType = types.choose(&mut rng).expect("types");
        let m = random_mults(&mut rng, 3);
        let perm = *all_permutations().choose(&mut rng).expect("permutations");
        let moved: Vec<DivisorClass> = ty.representative.iter().map(|c| c.permuted(&perm)).collect();
        let a = analyze(&FatPointScheme::new(&ty.representative, m).or_else(fail)?).or_else(fail)?;
        let b = analyze(&FatPointScheme::new(&moved, permute_mults(&m, &perm)).or_else(fail)?).or_else(fail)?;
        if a.hilbert != b.hilbert || a.resolution != b.resolution {
            return Err(format!("type {}, m = {m:?}, permutation {perm:?}", ty.id));
        }
    }
    Ok(format!("{trials} triples"))
}

/// `h^0` and the nef part do not depend on the order in which negative
/// curves are scanned.
pub fn check_order_independence(seed: u64, shuffles: usize) -> Result<String, String> {
    let checked: usize = all_types()
        .par_iter()
        .map(|ty| {
            let mut rng = type_rng(seed, ty.id);
            let curves = full_neg(&ty.representative).or_else(fail)?;
            let classes: Vec<DivisorClass> = (0..20)
                .map(|_| DivisorClass::new(rng.gen_range(0..=15), std::array::from_fn(|_| rng.gen_range(-2..=8))))
                .collect();
            let base: Vec<(u64, DivisorClass)> =
                classes.iter().map(|c| (h0(c, &curves), reduce_to_nef(c, &curves).reduced)).collect();
            for _ in 0..shuffles {
                let mut order: Vec<usize> = (0..curves.all().len()).collect();
                order.shuffle(&mut rng);
                let other = curves.reordered(&order);
                for (c, (h, reduced)) in classes.iter().zip(&base) {
                    let r = reduce_to_nef(c, &other);
                    if h0(c, &other) != *h || (r.effective && r.reduced != *reduced) {
                        return Err(format!("type {}: {c} depends on curve order", ty.id));
                    }
                }
            }
            Ok(classes.len() * shuffles)
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{checked} evaluations"))
}

/// Runs every check; failures carry a counterexample or the discrepancy found.
pub fn run_invariant_suite(seed: u64) -> Vec<CheckOutcome> {
    let checks: Vec<(&'static str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        ("lattice signature", Box::new(check_lattice_signature)),
        ("27 lines", Box::new(check_27_lines)),
        ("type count", Box::new(check_type_count)),
        ("graph determines torsion", Box::new(check_graph_torsion)),
        ("graph census", Box::new(check_graph_census)),
        ("hilbert duality and resolutions", Box::new(move || check_hilbert_and_resolutions(seed))),
        ("table 2 case lists", Box::new(check_table2)),
        ("lemma bounds on sampled nef classes", Box::new(move || check_lemma_samples(seed))),
        ("targeted surjectivity", Box::new(check_targeted_surjectivity)),
        ("5L-2E classes", Box::new(check_ad_hoc_class)),
        ("permutation equivariance", Box::new(move || check_permutation_equivariance(seed, 50))),
        ("curve order independence", Box::new(move || check_order_independence(seed, 20))),
    ];
    checks.into_iter().map(|(name, f)| CheckOutcome::from_result(name, f())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> NegCurveSet {
        full_neg(&[]).unwrap()
    }

    #[test]
    fn mu_stats_examples() {
        let s = mu_stats(&DivisorClass::zero(), &empty()).unwrap();
        assert_eq!((s.h0f, s.h0fl, s.ker_pred, s.cok_pred, s.q, s.l), (1, 3, 0, 0, 0, 0));
        let s = mu_stats(&DivisorClass::line(), &empty()).unwrap();
        assert_eq!((s.h0f, s.h0fl, s.ker_pred, s.cok_pred, s.l), (3, 6, 3, 0, 1));
        assert!(matches!(mu_stats(&DivisorClass::exceptional(0), &empty()), Err(Error::NotNef(_))));
    }

    #[test]
    fn bounds_on_multiples_of_line() {
        for t in 0..=5 {
            let checks = check_lemma_bounds(&(t * DivisorClass::line()), &empty()).unwrap();
            assert_eq!(checks.len(), 6);
            assert!(checks.iter().all(BoundsCheck::passed));
        }
    }

    #[test]
    fn valid_indices_skip_infinitely_near_points() {
        let curves = full_neg(&[DivisorClass::root(0, 1), DivisorClass::root(2, 3)]).unwrap();
        assert_eq!(valid_indices(&curves), vec![0, 2, 4, 5]);
    }

    #[test]
    fn sampler() {
        for ty in [1, 2, 90] {
            let curves = full_neg(&crate::type_by_id(ty).unwrap().representative).unwrap();
            let a = sample_nef(&curves, 50, 7);
            assert_eq!(a, sample_nef(&curves, 50, 7));
            assert_eq!(a.len(), 50);
            assert!(a.contains(&anticanonical_class()));
            assert!(a.iter().all(|f| is_nef(f, &curves)));
            assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), a.len());
        }
    }

    #[test]
    fn small_checks() {
        assert!(check_lattice_signature().is_ok());
        assert!(check_27_lines().is_ok());
        assert!(check_targeted_surjectivity().is_ok());
        assert!(check_ad_hoc_class().is_ok());
        assert!(check_graph_census().is_ok());
        assert!(check_graph_torsion().is_ok());
    }
}
