use std::fs;

use gocohom::cli::expr::{parse_expr, Parsed};
use gocohom::cli::run;
use gocohom::cohomring::CohomologyModel;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("gocohom").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn golden_text_outputs() {
    assert_eq!(run_args(&["basis", "--n", "2", "--degree", "5", "--format", "text"]).1, "a1^5, a1^2*a3, a1*b4, d{1,2}\n");
    assert_eq!(run_args(&["series", "--n", "1", "--max-degree", "5"]).1, "1 1 2 1 3 2\n");
    assert_eq!(
        run_args(&["table", "--n", "2"]).1,
        "H^0 = <1>\nH^1 = <a1>\nH^2 = <L, a1^2>\nH^3 = <a1^3, a3>\nH^4 = <L^2, a1^4, a1*a3, b4>\nH^5 = <a1^5, a1^2*a3, a1*b4, d{1,2}>\n"
    );
    assert_eq!(run_args(&["chern", "--n", "1", "--i", "1"]).1, "c1 = L + a1^2\n");
    assert_eq!(run_args(&["mul", "--n", "2", "d{1,2}", "d{1,2}"]).1, "a1^2*b8 + a3^2*b4\n");
}

#[test]
fn json_outputs_parse() {
    let (code, out, _) = run_args(&["basis", "--n", "2", "--degree", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let labels: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["L^2", "a1^4", "a1*a3", "b4"]);
    assert_eq!(v[3]["element"]["n"], 2);

    let (_, out, _) = run_args(&["chern", "--n", "2", "--i", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["formula_text"], "L^3 + L*b4 + a3^2");
    assert_eq!(v["i"], 3);

    let (_, out, _) = run_args(&["series", "--n", "2", "--max-degree", "3", "--kind", "kernel", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 1, 1, 2]));
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run_args(&["verify", "--n", "2", "--max-degree", "8", "--suite", "all"]);
    assert_eq!(code, 0, "{out}");
    for suite in ["koszul", "presentation", "cohomology", "chern"] {
        let (code, out, _) = run_args(&["verify", "--n", "3", "--max-degree", "6", "--suite", suite]);
        assert_eq!(code, 0, "{out}");
        assert!(out.lines().all(|l| l.starts_with(suite)), "{out}");
    }
    assert_eq!(run_args(&["verify", "--n", "2"]).0, 2);
}

#[test]
fn labels_round_trip_for_n3() {
    let model = CohomologyModel::new(3).unwrap();
    for d in 0..=8 {
        for b in model.basis(d).unwrap() {
            match parse_expr(&b.label, 3).unwrap() {
                Parsed::Class { element, .. } => assert_eq!(element, b.element, "{}", b.label),
                Parsed::Poly(p) => panic!("{p}"),
            }
        }
    }
}

#[test]
fn warm_cache_reproduces_cold_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let cold = run_args(&["verify", "--n", "2", "--max-degree", "10", "--cache-dir", path, "--format", "json"]);
    assert_eq!(cold.0, 0);
    let files = fs::read_dir(dir.path()).unwrap().count();
    assert!(files > 0);
    let warm = run_args(&["verify", "--n", "2", "--max-degree", "10", "--cache-dir", path, "--format", "json"]);
    assert_eq!(cold, warm);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), files);
    let uncached = run_args(&["verify", "--n", "2", "--max-degree", "10", "--format", "json"]);
    assert_eq!(cold, uncached);

    let basis_cold = run_args(&["basis", "--n", "3", "--degree", "7", "--cache-dir", path]);
    let basis_warm = run_args(&["basis", "--n", "3", "--degree", "7", "--cache-dir", path, "--jobs", "2"]);
    assert_eq!(basis_cold, basis_warm);
}

#[test]
fn corrupted_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let cold = run_args(&["basis", "--n", "2", "--degree", "6", "--cache-dir", path]);
    for entry in fs::read_dir(dir.path()).unwrap() {
        fs::write(entry.unwrap().path(), "{ not json").unwrap();
    }
    assert_eq!(run_args(&["basis", "--n", "2", "--degree", "6", "--cache-dir", path]), cold);
}

#[test]
fn usage_errors() {
    let (code, _, err) = run_args(&["basis", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--degree"));
    let (code, _, err) = run_args(&["coords", "--n", "2", "--degree", "4", "a1"]);
    assert_eq!(code, 2);
    assert!(err.contains("span"), "{err}");
    let (code, _, err) = run_args(&["mul", "--n", "1", "a1", "d{1,2}"]);
    assert_eq!(code, 2);
    assert!(err.contains("offset 0"), "{err}");
}
