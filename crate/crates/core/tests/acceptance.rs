//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Two criteria cannot pass because the reference tables disagree with the
//! enumeration (see README). For those the run still succeeds as long as the
//! disagreement is exactly the known one; any other outcome fails the run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use cubic_fatpoints::fatpoints::{analyze, forms_of_degree, module_string, table2, FatPointScheme};
use cubic_fatpoints::typeenum::{all_types, table1_reconciliation, type_by_id};
use cubic_fatpoints::verify::{
    check_27_lines, check_graph_census, check_hilbert_and_resolutions, check_lemma_samples, check_order_independence,
    check_permutation_equivariance, EXPECTED_TABLE2,
};

const SEED: u64 = 20240601;

enum Expect {
    Pass,
    /// Known failure; the closure recognizes the expected discrepancy.
    KnownFailure(fn(&str) -> bool),
}

struct Criterion {
    id: u32,
    name: &'static str,
    run: fn() -> Result<String, String>,
    expect: Expect,
}

fn table1_reproduction() -> Result<String, String> {
    let types = all_types();
    if types.len() != 90 {
        return Err(format!("{} rows loaded", types.len()));
    }
    let r = table1_reconciliation().map_err(|e| e.to_string())?;
    let summary = format!(
        "{} rows, {} orbits; shared {:?}; without row {:?}; not enumerated {:?}",
        r.row_count, r.orbit_count, r.shared_rows, r.missing_orbits, r.unenumerated_rows
    );
    if r.is_exact() {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn known_table1(detail: &str) -> bool {
    detail == "90 rows, 89 orbits; shared [[67, 71]]; without row []; not enumerated []"
}

fn graph_census() -> Result<String, String> {
    check_graph_census()
}

fn lines27() -> Result<String, String> {
    check_27_lines()
}

fn table2_reproduction() -> Result<String, String> {
    let cases = table2().map_err(|e| e.to_string())?;
    if let Some(c) = cases.iter().find(|c| c.name.is_none()) {
        return Err(format!("types {:?} have an unlisted outcome", c.types));
    }
    let mut problems = Vec::new();
    for (name, ids) in EXPECTED_TABLE2 {
        let got: BTreeSet<u32> = cases
            .iter()
            .filter(|c| c.name == Some(name))
            .flat_map(|c| c.types.iter().copied())
            .collect();
        let want: BTreeSet<u32> = ids.iter().copied().collect();
        for id in got.difference(&want) {
            problems.push(format!("type {id} computed in case {name}"));
        }
        for id in want.difference(&got) {
            problems.push(format!("type {id} listed in case {name}"));
        }
    }
    if problems.is_empty() {
        Ok(format!("{} cases over 90 types", cases.len()))
    } else {
        Err(problems.join("; "))
    }
}

fn known_table2(detail: &str) -> bool {
    detail == "type 48 listed in case 1; type 48 computed in case 2(b2)"
}

fn closing_example() -> Result<String, String> {
    let s = FatPointScheme::for_type(type_by_id(86).unwrap(), [3; 6]).map_err(|e| e.to_string())?;
    let r = analyze(&s).map_err(|e| e.to_string())?;
    let head: Vec<i64> = (0..8).map(|t| r.hilbert.ideal_at(t)).collect();
    if head != [0, 0, 0, 0, 0, 0, 1, 3] {
        return Err(format!("h_I = {head:?}"));
    }
    if let Some(t) = (8..40).find(|&t| r.hilbert.ideal_at(t) != forms_of_degree(t) - 36) {
        return Err(format!("h_I({t}) = {}", r.hilbert.ideal_at(t)));
    }
    let f0 = module_string(&r.resolution.f0);
    let f1 = module_string(&r.resolution.f1);
    if f0 != "R[-9]^3 + R[-8]^3 + R[-6]" || f1 != "R[-10]^3 + R[-9]^3" {
        return Err(format!("F0 = {f0}, F1 = {f1}"));
    }
    Ok(format!("F0 = {f0}, F1 = {f1}"))
}

fn lemma_consistency() -> Result<String, String> {
    check_lemma_samples(SEED)
}

fn properties() -> Result<String, String> {
    let a = check_hilbert_and_resolutions(SEED)?;
    let b = check_permutation_equivariance(SEED, 50)?;
    let c = check_order_independence(SEED, 20)?;
    Ok(format!("{a}; {b}; {c}"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "type table reproduction", run: table1_reproduction, expect: Expect::KnownFailure(known_table1) },
        Criterion { id: 2, name: "graph census", run: graph_census, expect: Expect::Pass },
        Criterion { id: 3, name: "27 lines", run: lines27, expect: Expect::Pass },
        Criterion { id: 4, name: "resolution table reproduction", run: table2_reproduction, expect: Expect::KnownFailure(known_table2) },
        Criterion { id: 5, name: "type 86 with m = 3", run: closing_example, expect: Expect::Pass },
        Criterion { id: 6, name: "lemma bounds on sampled nef classes", run: lemma_consistency, expect: Expect::Pass },
        Criterion { id: 7, name: "property suites", run: properties, expect: Expect::Pass },
    ];
    let mut ok = true;
    for c in criteria {
        let start = Instant::now();
        let result = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail, as_expected) = match (&result, &c.expect) {
            (Ok(d), Expect::Pass) => ("PASS", d.clone(), true),
            (Ok(d), Expect::KnownFailure(_)) => ("PASS", format!("{d} (expected a known failure)"), false),
            (Err(d), Expect::Pass) => ("FAIL", d.clone(), false),
            (Err(d), Expect::KnownFailure(known)) => {
                let k = known(d);
                ("FAIL", if k { format!("{d} (known)") } else { d.clone() }, k)
            }
        };
        println!("criterion {} {}: {status} [{secs:.1}s] {detail}", c.id, c.name);
        ok &= as_expected;
    }
    if ok {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected result");
        ExitCode::FAILURE
    }
}
