//! The binary end to end: exit codes, report shapes, determinism.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn mtcluster(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_mtcluster")).args(args).output().expect("spawn binary");
    let report = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), report)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn single_clause_is_in_region() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "one.cnf", "p cnf 3 1\n1 2 3 0\n");
    let (code, r) = mtcluster(&["check", "--input", &cnf]);
    assert_eq!(code, 0);
    assert_eq!(r["in_region"], true);
    assert_eq!(r["schema_version"], 1);
    let t = r["mt_bounds"]["per_vertex"][0]["t_bound"].as_f64().unwrap();
    assert!((t - 0.125 / 0.875).abs() < 1e-12);
}

#[test]
fn dense_triangle_is_out_of_region_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.graph", "g 3 3\n0.4 0.4 0.4\n0 1\n1 2\n0 2\n");
    let (code, r) = mtcluster(&["check", "--input", &g]);
    assert_eq!(code, 2);
    assert_eq!(r["in_region"], false);
    assert_eq!(r["shearer"]["witness"], serde_json::json!([0, 1, 2]));
    assert!(r.get("mt_bounds").is_none());
    let (code, r) = mtcluster(&["check", "--input", &g, "--paranoid"]);
    assert_eq!(code, 2);
    assert_eq!(r["shearer"]["exhaustive"], true);
}

#[test]
fn zero_probabilities_give_zero_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "zero.graph", "g 3 2\n0 0 0\n0 1\n1 2\n");
    let (code, r) = mtcluster(&["check", "--input", &g]);
    assert_eq!(code, 0);
    assert_eq!(r["mt_bounds"]["total_bound"].as_f64(), Some(0.0));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cnf", "p cnf 2 1\n1 3 0\n");
    let (code, r) = mtcluster(&["check", "--input", &bad]);
    assert_eq!(code, 1);
    assert!(r["error"].as_str().unwrap().contains("line"));
    let (code, _) = mtcluster(&["check", "--input", "/nonexistent/x.cnf"]);
    assert_eq!(code, 1);
}

#[test]
fn run_is_deterministic_and_respects_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "f.cnf", "p cnf 4 4\n1 2 0\n-1 3 0\n-2 -3 0\n4 -1 0\n");
    let a = mtcluster(&["run", "--input", &cnf, "--seed", "9"]);
    let b = mtcluster(&["run", "--input", &cnf, "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert_eq!(a.1["assignment_verified"], true);

    let unsat = write(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let (code, r) = mtcluster(&["run", "--input", &unsat, "--step-cap", "25"]);
    assert_eq!(code, 3);
    assert_eq!(r["log"]["terminated"], false);
    assert_eq!(r["log"]["steps"].as_array().unwrap().len(), 25);
    let (code, _) = mtcluster(&["run", "--input", &unsat, "--step-cap", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn batch_run_reports_means() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "c.cnf", "p cnf 1 1\n1 0\n");
    let (code, r) = mtcluster(&["run", "--input", &cnf, "--seeds", "0..500", "--rule", "random"]);
    assert_eq!(code, 0);
    assert_eq!(r["runs"], 500);
    let mean = r["events"][0]["mean"].as_f64().unwrap();
    assert!((mean - 1.0).abs() < 0.3);
}

#[test]
fn enumerate_trees() {
    let (code, r) = mtcluster(&["enumerate", "plane", "--n-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["count"], 2);
    let (_, r) = mtcluster(&["enumerate", "plane", "--n-max", "0"]);
    assert_eq!(r["items"], serde_json::json!(["()"]));
    let (_, r) = mtcluster(&["enumerate", "labeled", "--n-max", "3"]);
    assert_eq!(r["count"], 16);

    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", "g 3 3\n0.1 0.1 0.1\n0 1\n1 2\n0 2\n");
    let (code, r) = mtcluster(&["enumerate", "penrose", "--tuple", "0,1,2", "--input", &g]);
    assert_eq!(code, 0);
    assert_eq!(r["count"], 2);
}

#[test]
fn verify_passes_and_mutation_is_caught() {
    let (code, r) = mtcluster(&["verify", "--n-max", "3", "--witness-runs", "20"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["all_pass"], true);
    let (code, r) = mtcluster(&["verify", "--n-max", "3", "--witness-runs", "20", "--mutate"]);
    assert_eq!(code, 2);
    assert_eq!(r["all_pass"], false);
}

#[test]
fn output_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (_, stdout) = mtcluster(&["enumerate", "plane", "--n-max", "3"]);
    let status = Command::new(env!("CARGO_BIN_EXE_mtcluster"))
        .args(["enumerate", "plane", "--n-max", "3", "--output", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written, stdout);
}
