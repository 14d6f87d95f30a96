//! Unordered configuration types.
//!
//! A configuration type is a pairwise nonnegative subset of the 36 (-2)-classes
//! `Ei-Ej (i<j)`, `L-Ei-Ej-Ek`, `2L-E1-...-E6`, taken up to relabeling of the
//! points. The embedded table supplies numbering and labels; each row is
//! checked on load. Orbits are also found by brute force, one class at a time,
//! and [`reconcile`] reports how they line up with the rows. They do not line
//! up exactly: rows 67 and 71 are one orbit, so there are 89 orbits for 90 rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{integer_rank, DivisorClass, Permutation, N_POINTS};
use crate::notation::parse_negset;
use crate::smith::invariant_factors;

/// The embedded table: `id`, `label`, letter notation, torsion.
pub const TABLE1_TSV: &str = include_str!("../data/table1.tsv");

pub const POOL_SIZE: usize = 36;

/// The 36 candidate (-2)-classes: the 15 `Ei-Ej` with `i<j`, the 20
/// `L-Ei-Ej-Ek` with `i<j<k`, then `2L-E1-...-E6`, each block in
/// lexicographic order of indices.
pub fn candidate_pool() -> &'static [DivisorClass] {
    static POOL: OnceLock<Vec<DivisorClass>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool: Vec<DivisorClass> = (0..N_POINTS)
            .tuple_combinations()
            .map(|(i, j)| DivisorClass::root(i, j))
            .collect();
        pool.extend(
            (0..N_POINTS)
                .tuple_combinations()
                .map(|(i, j, k)| DivisorClass::through(1, &[i, j, k])),
        );
        pool.push(DivisorClass::through(2, &[0, 1, 2, 3, 4, 5]));
        pool
    })
}

pub fn pool_index(c: &DivisorClass) -> Option<usize> {
    candidate_pool().iter().position(|p| p == c)
}

/// All 720 permutations of the point indices, in lexicographic order.
pub fn all_permutations() -> &'static [Permutation] {
    static PERMS: OnceLock<Vec<Permutation>> = OnceLock::new();
    PERMS.get_or_init(|| {
        (0..N_POINTS)
            .permutations(N_POINTS)
            .map(|p| p.try_into().unwrap())
            .collect()
    })
}

/// For each permutation, where it sends each pool class (if still in the pool).
fn pool_images() -> &'static [[Option<u8>; POOL_SIZE]] {
    static IMAGES: OnceLock<Vec<[Option<u8>; POOL_SIZE]>> = OnceLock::new();
    IMAGES.get_or_init(|| {
        all_permutations()
            .iter()
            .map(|p| {
                let mut row = [None; POOL_SIZE];
                for (i, c) in candidate_pool().iter().enumerate() {
                    row[i] = pool_index(&c.permuted(p)).map(|k| k as u8);
                }
                row
            })
            .collect()
    })
}

fn pool_products() -> &'static [[i64; POOL_SIZE]; POOL_SIZE] {
    static PRODUCTS: OnceLock<[[i64; POOL_SIZE]; POOL_SIZE]> = OnceLock::new();
    PRODUCTS.get_or_init(|| {
        let pool = candidate_pool();
        let mut m = [[0; POOL_SIZE]; POOL_SIZE];
        for i in 0..POOL_SIZE {
            for j in 0..POOL_SIZE {
                m[i][j] = pool[i].intersect(&pool[j]);
            }
        }
        m
    })
}

fn to_indices(t: &[DivisorClass]) -> Result<Vec<usize>> {
    t.iter().map(|c| pool_index(c).ok_or(Error::NotInPool(*c))).collect()
}

/// Lexicographically least sorted index list over all relabelings that keep
/// the set inside the pool, with a permutation achieving it.
fn canonical_indices(t: &[usize]) -> (Vec<usize>, Permutation) {
    let mut best: Option<(Vec<usize>, usize)> = None;
    for (p, images) in pool_images().iter().enumerate() {
        let Some(mut img) = t.iter().map(|&i| images[i].map(usize::from)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        img.sort_unstable();
        if best.as_ref().map_or(true, |(b, _)| img < *b) {
            best = Some((img, p));
        }
    }
    let (idx, p) = best.expect("identity keeps the set in the pool");
    (idx, all_permutations()[p])
}

/// Canonical representative of the orbit of `t` under relabeling the points,
/// and a permutation sending `t` to it.
pub fn canonicalize(t: &[DivisorClass]) -> Result<(Vec<DivisorClass>, Permutation)> {
    let idx = to_indices(t)?;
    let (canon, perm) = canonical_indices(&idx);
    let pool = candidate_pool();
    Ok((canon.into_iter().map(|i| pool[i]).collect(), perm))
}

/// Canonical index lists of all pairwise nonnegative subsets of the pool,
/// up to relabeling, grown one class at a time.
pub fn enumerate_orbits() -> Vec<Vec<usize>> {
    let products = pool_products();
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
    let mut all: Vec<Vec<usize>> = level.iter().cloned().collect();
    for _ in 0..N_POINTS {
        let mut next = BTreeSet::new();
        for t in &level {
            for c in 0..POOL_SIZE {
                if t.contains(&c) || t.iter().any(|&d| products[c][d] < 0) {
                    continue;
                }
                let mut grown = t.clone();
                grown.push(c);
                next.insert(canonical_indices(&grown).0);
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DynkinComponent {
    pub family: DynkinFamily,
    pub rank: usize,
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}_{}", self.family, self.rank)
    }
}

/// Intersection graph of a set of (-2)-classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinGraph {
    pub adjacency: Vec<Vec<u8>>,
    /// Sorted by family, then rank.
    pub components: Vec<DynkinComponent>,
    pub name: String,
}

fn component_shape(vertices: &[usize], adj: &[Vec<u8>]) -> Option<DynkinComponent> {
    let n = vertices.len();
    let degree = |v: usize| adj[v].iter().filter(|&&x| x == 1).count();
    let edges: usize = vertices.iter().map(|&v| degree(v)).sum::<usize>() / 2;
    if edges + 1 != n {
        return None;
    }
    let branch: Vec<usize> = vertices.iter().copied().filter(|&v| degree(v) >= 3).collect();
    match branch.as_slice() {
        [] => Some(DynkinComponent { family: DynkinFamily::A, rank: n }),
        [center] if degree(*center) == 3 => {
            let mut legs: Vec<usize> = (0..adj.len())
                .filter(|&u| adj[*center][u] == 1)
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (*center, start, 1);
                    while let Some(next) = (0..adj.len()).find(|&w| adj[cur][w] == 1 && w != prev) {
                        (prev, cur) = (cur, next);
                        len += 1;
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match legs.as_slice() {
                [1, 1, k] => Some(DynkinComponent { family: DynkinFamily::D, rank: k + 3 }),
                [1, 2, 2] => Some(DynkinComponent { family: DynkinFamily::E, rank: 6 }),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Components `A_1..A_5`, `D_4`, `D_5`, `E_6`; anything else is a consistency error.
pub fn dynkin_graph(classes: &[DivisorClass]) -> Result<DynkinGraph> {
    let n = classes.len();
    let mut adjacency = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = classes[i].intersect(&classes[j]);
            if !(0..=1).contains(&w) {
                return Err(Error::Consistency(format!(
                    "edge weight {w} between {} and {}",
                    classes[i], classes[j]
                )));
            }
            adjacency[i][j] = w as u8;
        }
    }

    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut stack = vec![root];
        let mut members = Vec::new();
        seen[root] = true;
        while let Some(v) = stack.pop() {
            members.push(v);
            for u in 0..n {
                if adjacency[v][u] == 1 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        let shape = component_shape(&members, &adjacency)
            .filter(|c| match c.family {
                DynkinFamily::A => c.rank <= 5,
                DynkinFamily::D => c.rank <= 5,
                DynkinFamily::E => true,
            })
            .ok_or_else(|| Error::Consistency(format!("component {members:?} is not an allowed Dynkin diagram")))?;
        components.push(shape);
    }
    components.sort();
    let name = components
        .iter()
        .dedup_with_count()
        .map(|(k, c)| if k > 1 { format!("{k}{c}") } else { c.to_string() })
        .collect();
    Ok(DynkinGraph { adjacency, components, name })
}

/// Torsion of `K^perp / <T>` as invariant factors greater than one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TorsionGroup {
    pub invariant_factors: Vec<i64>,
}

impl TorsionGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Coordinates of a class of `K^perp` in the basis
/// `E1-E2, ..., E5-E6, L-E1-E2-E3`.
pub fn kperp_coordinates(c: &DivisorClass) -> Result<[i64; N_POINTS]> {
    let mut r = c.m;
    for x in &mut r[..3] {
        *x += c.d;
    }
    if r.iter().sum::<i64>() != 0 {
        return Err(Error::NotInKPerp(*c));
    }
    let mut coords = [0; N_POINTS];
    let mut running = 0;
    for k in 0..N_POINTS - 1 {
        running += r[k];
        coords[k] = running;
    }
    coords[N_POINTS - 1] = c.d;
    Ok(coords)
}

pub fn torsion(classes: &[DivisorClass]) -> Result<TorsionGroup> {
    let rows = classes
        .iter()
        .map(|c| kperp_coordinates(c).map(|x| x.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let invariant_factors = invariant_factors(&rows).into_iter().filter(|&d| d > 1).collect();
    Ok(TorsionGroup { invariant_factors })
}

/// One row of the embedded table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub id: u32,
    pub label: String,
    pub notation: String,
    pub torsion: String,
}

pub fn parse_table1(tsv: &str) -> Result<Vec<Table1Row>> {
    let bad = |line: usize, what: &str| Error::Consistency(format!("table line {line}: {what}"));
    let mut rows = Vec::new();
    for (n, line) in tsv.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, label, notation, torsion] = fields.as_slice() else {
            return Err(bad(n + 1, "expected 4 tab-separated fields"));
        };
        rows.push(Table1Row {
            id: id.parse().map_err(|_| bad(n + 1, "bad id"))?,
            label: label.to_string(),
            notation: notation.to_string(),
            torsion: torsion.to_string(),
        });
    }
    Ok(rows)
}

/// A configuration type with its table data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationType {
    pub id: u32,
    pub label: String,
    /// Letter notation as printed in the table.
    pub notation: String,
    /// The classes as printed in the table; used for fat point computations.
    pub representative: Vec<DivisorClass>,
    /// Canonical representative of the orbit.
    pub classes: Vec<DivisorClass>,
    pub graph: DynkinGraph,
    pub torsion: TorsionGroup,
}

fn graph_name_from_label(label: &str) -> &str {
    if label == "empty" {
        return "";
    }
    match label.chars().last() {
        Some(c) if c.is_ascii_lowercase() => &label[..label.len() - 1],
        _ => label,
    }
}

fn check_pairwise(classes: &[DivisorClass]) -> Result<()> {
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            let product = a.intersect(b);
            if product < 0 || a == b {
                return Err(Error::NotPairwiseNonnegative { a: *a, b: *b, product });
            }
        }
    }
    Ok(())
}

/// Builds the types from the rows of `tsv`, checking each row's classes,
/// graph against its label and torsion against the table.
pub fn load_types(tsv: &str) -> Result<Vec<ConfigurationType>> {
    let pool = candidate_pool();
    let mut types = Vec::new();
    for (n, row) in parse_table1(tsv)?.into_iter().enumerate() {
        let bad = |what: String| Error::Consistency(format!("type {}: {what}", row.id));
        if row.id as usize != n + 1 {
            return Err(bad(format!("expected id {}", n + 1)));
        }
        let representative = parse_negset(&row.notation).map_err(|e| bad(e.to_string()))?;
        check_pairwise(&representative).map_err(|e| bad(e.to_string()))?;
        if integer_rank(&representative) != representative.len() {
            return Err(bad("classes are linearly dependent".into()));
        }
        let (canon, _) = canonical_indices(&to_indices(&representative).map_err(|e| bad(e.to_string()))?);
        let classes: Vec<DivisorClass> = canon.iter().map(|&i| pool[i]).collect();
        let graph = dynkin_graph(&classes)?;
        let torsion = torsion(&classes)?;
        if graph.name != graph_name_from_label(&row.label) {
            return Err(bad(format!("graph {} does not match label {}", graph.name, row.label)));
        }
        if torsion.to_string() != row.torsion {
            return Err(bad(format!("torsion {torsion} does not match table {}", row.torsion)));
        }
        types.push(ConfigurationType {
            id: row.id,
            label: row.label,
            notation: row.notation,
            representative,
            classes,
            graph,
            torsion,
        });
    }
    Ok(types)
}

/// How the enumerated orbits line up with the table rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Reconciliation {
    pub orbit_count: usize,
    pub row_count: usize,
    /// Groups of row ids lying in the same orbit.
    pub shared_rows: Vec<Vec<u32>>,
    /// Enumerated orbits without a row, in letter notation.
    pub missing_orbits: Vec<String>,
    /// Rows whose orbit was not enumerated.
    pub unenumerated_rows: Vec<u32>,
}

impl Table1Reconciliation {
    pub fn is_exact(&self) -> bool {
        self.shared_rows.is_empty()
            && self.missing_orbits.is_empty()
            && self.unenumerated_rows.is_empty()
            && self.orbit_count == self.row_count
    }
}

pub fn reconcile(types: &[ConfigurationType], orbits: &[Vec<usize>]) -> Result<Table1Reconciliation> {
    let pool = candidate_pool();
    let mut by_orbit: BTreeMap<Vec<usize>, Vec<u32>> = BTreeMap::new();
    for t in types {
        by_orbit.entry(to_indices(&t.classes)?).or_default().push(t.id);
    }
    let enumerated: BTreeSet<&Vec<usize>> = orbits.iter().collect();
    let mut missing_orbits = Vec::new();
    for o in orbits {
        if !by_orbit.contains_key(o) {
            let classes: Vec<DivisorClass> = o.iter().map(|&i| pool[i]).collect();
            missing_orbits.push(crate::notation::format_negset(&classes)?);
        }
    }
    Ok(Table1Reconciliation {
        orbit_count: orbits.len(),
        row_count: types.len(),
        shared_rows: by_orbit.values().filter(|ids| ids.len() > 1).cloned().collect(),
        missing_orbits,
        unenumerated_rows: by_orbit
            .iter()
            .filter(|(o, _)| !enumerated.contains(o))
            .flat_map(|(_, ids)| ids.iter().copied())
            .collect(),
    })
}

/// Enumerates the orbits and compares them with the embedded table.
pub fn table1_reconciliation() -> Result<Table1Reconciliation> {
    reconcile(all_types(), &enumerate_orbits())
}

pub fn enumerate_types() -> Result<Vec<ConfigurationType>> {
    load_types(TABLE1_TSV)
}

/// The types of the embedded table, built once. Panics if a row fails its checks.
pub fn all_types() -> &'static [ConfigurationType] {
    static TYPES: OnceLock<Vec<ConfigurationType>> = OnceLock::new();
    TYPES.get_or_init(|| match enumerate_types() {
        Ok(t) => t,
        Err(e) => panic!("configuration table failed to load: {e}"),
    })
}

pub fn type_by_id(id: u32) -> Result<&'static ConfigurationType> {
    all_types()
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| Error::UnknownType(id.to_string()))
}

/// Serializes the types in the embedded table format.
pub fn table1_tsv(types: &[ConfigurationType]) -> String {
    let mut out = String::from("id\tlabel\tneg\ttorsion\n");
    for t in types {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", t.id, t.label, t.notation, t.torsion));
    }
    out
}

pub fn table1() -> String {
    table1_tsv(all_types())
}

#[derive(Clone, Debug)]
pub struct Classification {
    /// The lowest-numbered row of the orbit.
    pub ty: &'static ConfigurationType,
    /// Every row id of the orbit.
    pub rows: Vec<u32>,
    /// Sends the input classes onto `ty.classes`.
    pub witness: Permutation,
}

/// Finds the type of a set of (-2)-classes.
pub fn classify(neg: &[DivisorClass]) -> Result<Classification> {
    to_indices(neg)?;
    check_pairwise(neg)?;
    let (canon, witness) = canonicalize(neg)?;
    let matches: Vec<&'static ConfigurationType> = all_types().iter().filter(|t| t.classes == canon).collect();
    let Some(&ty) = matches.first() else {
        return Err(Error::Consistency(format!(
            "orbit {} has no row in the table",
            crate::notation::format_negset(&canon)?
        )));
    };
    Ok(Classification { ty, rows: matches.iter().map(|t| t.id).collect(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_class;

    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i - 1)
    }

    #[test]
    fn pool() {
        let pool = candidate_pool();
        assert_eq!(pool.len(), 36);
        for c in pool {
            assert_eq!(c.self_intersection(), -2);
            assert_eq!(c.intersect(&canonical_class()), 0);
        }
        assert_eq!(pool[0], e(1) - e(2));
        assert_eq!(pool[15], DivisorClass::through(1, &[0, 1, 2]));
    }

    #[test]
    fn canonicalize_examples() {
        let (a, _) = canonicalize(&[e(1) - e(3), e(2) - e(4)]).unwrap();
        let (b, _) = canonicalize(&[e(1) - e(2), e(3) - e(4)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonicalize(&[]).unwrap().0, vec![]);
        for (i, j) in (0..6).tuple_combinations() {
            let (c, p) = canonicalize(&[DivisorClass::root(i, j)]).unwrap();
            assert_eq!(c, vec![e(1) - e(2)]);
            assert_eq!(DivisorClass::root(i, j).permuted(&p), e(1) - e(2));
        }
        assert!(matches!(canonicalize(&[e(2) - e(1)]), Err(Error::NotInPool(_))));
    }

    #[test]
    fn dynkin_examples() {
        assert_eq!(dynkin_graph(&[e(1) - e(2), e(2) - e(3)]).unwrap().name, "A_2");
        assert_eq!(dynkin_graph(&[]).unwrap().name, "");
        let e6 = parse_negset("0: AB, BC, CD, DE, EF; 1: ABC").unwrap();
        assert_eq!(dynkin_graph(&e6).unwrap().name, "E_6");
        let d4 = parse_negset("0: BC, CD, DE; 1: ABC").unwrap();
        assert_eq!(dynkin_graph(&d4).unwrap().name, "D_4");
        let g = parse_negset("0: AB, CF, DE; 1: ABC, ADE").unwrap();
        assert_eq!(dynkin_graph(&g).unwrap().name, "A_12A_2");
    }

    #[test]
    fn dynkin_rejects_weight_two() {
        let t = [e(1) - e(2), e(2) - e(1)];
        assert!(matches!(dynkin_graph(&t), Err(Error::Consistency(_))));
    }

    #[test]
    fn torsion_examples() {
        let t = parse_negset("0: BC, DE; 1: ABC, ADE").unwrap();
        assert_eq!(torsion(&t).unwrap().invariant_factors, vec![2]);
        let t = parse_negset("0: AB, BC, DE, EF; 1: ABC, DEF").unwrap();
        assert_eq!(torsion(&t).unwrap().invariant_factors, vec![3]);
        assert!(torsion(&[e(1) - e(2)]).unwrap().is_trivial());
        assert!(matches!(torsion(&[e(1)]), Err(Error::NotInKPerp(_))));
        assert_eq!(kperp_coordinates(&(e(1) - e(2))).unwrap(), [1, 0, 0, 0, 0, 0]);
        assert_eq!(kperp_coordinates(&DivisorClass::through(1, &[0, 1, 2])).unwrap(), [0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn corrupted_table_fails() {
        let broken = TABLE1_TSV.replace("32\t4A_1a\t0: BC, DE; 1: ABC, ADE\tZ2", "32\t4A_1a\t0: BC, DE; 1: ABC, ADE\t0");
        assert!(matches!(load_types(&broken), Err(Error::Consistency(_))));
        let relabeled = TABLE1_TSV.replace("\tA_1A_3a\t", "\tA_4a\t");
        assert!(load_types(&relabeled).is_err());
        let dropped: String = TABLE1_TSV.lines().filter(|l| !l.starts_with("90\t")).map(|l| format!("{l}\n")).collect();
        let types = load_types(&dropped).unwrap();
        let r = reconcile(&types, &enumerate_orbits()).unwrap();
        assert!(r.missing_orbits.contains(&"0: AB, BC, CD, DE, EF; 1: ABC".to_string()));
    }

    #[test]
    fn table_reconciliation() {
        let r = table1_reconciliation().unwrap();
        assert_eq!(r.row_count, 90);
        assert_eq!(r.orbit_count, 89);
        assert_eq!(r.shared_rows, vec![vec![67, 71]]);
        assert!(r.missing_orbits.is_empty());
        assert!(r.unenumerated_rows.is_empty());
        assert!(!r.is_exact());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&parse_negset("0: AB; 1: CDE").unwrap()).unwrap();
        assert_eq!(c.ty.graph.name, "2A_1");
        let t = parse_negset("0: BC, CF, DE; 1: ABC, ADE").unwrap();
        let c = classify(&t).unwrap();
        assert_eq!((c.ty.id, c.rows.clone()), (67, vec![67, 71]));
        let moved: Vec<DivisorClass> = t.iter().map(|x| x.permuted(&c.witness)).collect();
        let (a, b): (BTreeSet<_>, BTreeSet<_>) = (moved.into_iter().collect(), c.ty.classes.iter().copied().collect());
        assert_eq!(a, b);
        assert_eq!(classify(&parse_negset("0: AB, BC; 1: ABD, DEF").unwrap()).unwrap().ty.id, 48);
        assert!(matches!(classify(&parse_negset("0: AB, BC; 1: ABC, ACD").unwrap()), Err(Error::NotPairwiseNonnegative { .. })));
    }
}
