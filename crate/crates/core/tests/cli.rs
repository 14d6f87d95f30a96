use cubic_fatpoints::cli::run;
use cubic_fatpoints::typeenum::TABLE1_TSV;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cubic-fatpoints").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_json() {
    let (code, out, _) = call(&["types", "classify", "--neg", "0: AB, CD; 2: ABCDEF", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["id"], 16);
    assert_eq!(v["label"], "3A_1d");
    assert_eq!(v["graph"], "3A_1");
    assert_eq!(v["torsion"], "0");
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_permuted_input() {
    let (code, out, _) = call(&["types", "classify", "--neg", "0: CE; 1: ABF", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["graph"], "2A_1");
}

#[test]
fn betti_closing_example() {
    let (code, out, _) = call(&["betti", "--type", "86", "--mults", "3,3,3,3,3,3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let pairs = |key: &str| -> Vec<(i64, i64)> {
        v[key]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| (s["shift"].as_i64().unwrap(), s["mult"].as_i64().unwrap()))
            .collect()
    };
    assert_eq!(pairs("F0"), vec![(6, 1), (8, 3), (9, 3)]);
    assert_eq!(pairs("F1"), vec![(9, 3), (10, 3)]);
    assert_eq!(v["degZ"], 36);
}

#[test]
fn hilbert_general_points() {
    let (code, out, _) = call(&["hilbert", "--type", "1", "--mults", "1,1,1,1,1,1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["hilbert_Z"], serde_json::json!([1, 3, 6]));
    assert_eq!(v["tail_from"], 2);
}

#[test]
fn hilbert_reports_reduction_and_tmax() {
    let (code, out, _) = call(&["hilbert", "--type", "0: AB", "--mults", "1,3,0,0,0,0", "--tmax", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mults"], serde_json::json!([1, 3, 0, 0, 0, 0]));
    assert_eq!(v["reduced_mults"], serde_json::json!([2, 2, 0, 0, 0, 0]));
    assert_eq!(v["hilbert_I"].as_array().unwrap().len(), 7);
}

#[test]
fn table1_is_byte_identical() {
    let (code, out, _) = call(&["tables", "--which", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, TABLE1_TSV);
}

#[test]
fn table2_text_lists_cases() {
    let (code, out, _) = call(&["tables", "--which", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("case 2(a): types 34, 68, 87\n"));
    assert!(out.contains("case 2(b3): types 17, 41, 45, 65, 75, 77, 80, 86\n"));
}

#[test]
fn csv_output() {
    let (code, out, _) = call(&["types", "list", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "id,label,neg,graph,torsion");
    assert_eq!(lines.len(), 91);
    assert_eq!(lines[9], "9,2A_1e,\"1: ABC, ADE\",2A_1,0");
}

#[test]
fn validation_errors_exit_1() {
    for args in [
        vec!["betti", "--type", "91", "--mults", "1,1,1,1,1,1"],
        vec!["betti", "--type", "0: BA", "--mults", "1,1,1,1,1,1"],
        vec!["betti", "--type", "3", "--mults", "1,1"],
        vec!["betti", "--type", "3", "--mults", "1,1,1,1,1,-1"],
        vec!["hilbert", "--type", "0: AB, AC, BC", "--mults", "1,1,1,1,1,1"],
        vec!["types", "classify", "--neg", "0: AB; 1: ABC; 0: AB"],
        vec!["tables", "--which", "3"],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("betti"));
}
