use std::process::Command;

use reflectomap_cli::run_command;
use serde_json::Value;

const TABLES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../tables");

fn run(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["reflectomap"];
    argv.extend_from_slice(args);
    let out = run_command(argv);
    assert!(out.code != 2, "usage error: {}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).expect("json report"))
}

fn table(name: &str) -> String {
    format!("{TABLES}/{name}")
}

fn statuses(v: &Value) -> Vec<String> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn verify_family() {
    let (code, v) = run(&["verify", "--family", "F3", "--checks", "yb,reversibility,pi"]);
    assert_eq!(code, 0);
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["schema"], 1);
    assert_eq!(statuses(&v), ["pass", "pass", "pass"]);
}

#[test]
fn verify_randomized_and_from_file() {
    let (code, v) = run(&["verify", "--map", &table("table1_f4.map"), "--method", "randomized", "--trials", "20"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["method"] == "randomized"));
}

#[test]
fn verify_fails_for_a_non_solution() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.map");
    std::fs::write(&p, "kind: yang_baxter\nname: shift\nf = Y + 1\ng = X\n").unwrap();
    let (code, v) = run(&["verify", "--map", p.to_str().unwrap(), "--checks", "reversibility"]);
    assert_eq!(code, 1);
    assert_eq!(v["overall"], "fail");
    assert!(v["checks"][0]["witness"].is_object());
}

#[test]
fn reflect_table_row() {
    let (code, v) = run(&["reflect", "--family", "F3", "--map", &table("table2_f3.map"), "--method", "exact"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(statuses(&v).len(), 3);
}

#[test]
fn reflect_identity_and_mu() {
    let (code, _) = run(&["reflect", "--family", "F5"]);
    assert_eq!(code, 0);
    let (code, v) = run(&["reflect", "--map", &table("table2_f4.map"), "--mu", "5/2", "--method", "randomized"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn reflect_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("perturbed.map");
    std::fs::write(&p, "kind: reflection\nname: doubled\nh = 2*a*X/mu\nsigma = mu^2/a\n").unwrap();
    let (code, v) = run(&["reflect", "--family", "F3", "--map", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["overall"], "fail");
}

#[test]
fn fold_tables() {
    let (code, v) = run(&["fold", "--family", "F4"]);
    assert_eq!(code, 0);
    // two rows plus swaps, three checks each, and two degenerate rows
    assert_eq!(statuses(&v).len(), 8);
    let (code, v) = run(&["fold", "--family", "F5", "--table", "3", "--method", "randomized", "--count", "2", "--trials", "10"]);
    assert_eq!(code, 0);
    assert_eq!(statuses(&v).len(), 3);
    let (code, _) = run(&["fold", "--map", &table("table2_f3.map")]);
    assert_eq!(code, 0);
}

#[test]
fn discover_small_budget() {
    let (code, v) = run(&["discover", "--family", "F5", "--mu", "2", "--budget", "30", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["restarts"], 30);
    assert_eq!(v["data"]["solutions"].as_array().unwrap().len(), 0);
}

#[test]
fn transfer_commutes() {
    let (code, v) = run(&["transfer", "--family", "F4", "--sites", "3", "--trials", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["transfer_maps"][1], "T2 = R32 K2- R23 R21 K2+ R12");
    let (code, _) = run(&["transfer", "--family", "F3", "--map", &table("table2_f3.map"), "--sites", "3", "--mu", "3", "--trials", "30"]);
    assert_eq!(code, 0);
}

#[test]
fn reports_are_reproducible() {
    let args = ["transfer", "--family", "F2", "--sites", "3", "--trials", "20", "--seed", "11"];
    let a = run_command(std::iter::once("reflectomap").chain(args));
    let b = run_command(std::iter::once("reflectomap").chain(args));
    assert_eq!(a, b);
    let t = run_command(std::iter::once("reflectomap").chain(args).chain(["--timings"]));
    assert!(t.stdout.contains("timing_ms"));
    assert!(!a.stdout.contains("timing_ms"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["reflectomap", "frobnicate"],
        vec!["reflectomap", "verify"],
        vec!["reflectomap", "verify", "--family", "F9"],
        vec!["reflectomap", "verify", "--family", "F1", "--checks", "nope"],
        vec!["reflectomap", "reflect", "--family", "F1", "--map", "/nonexistent.map"],
        vec!["reflectomap", "discover", "--family", "F3", "--mu", "0", "--budget", "1"],
        vec!["reflectomap", "transfer", "--family", "F3", "--sites", "1"],
        vec!["reflectomap", "verify", "--family", "F1", "--method", "symbolic"],
    ] {
        let out = run_command(args.clone());
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn spec_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("undeclared.map");
    std::fs::write(&p, "kind: yang_baxter\nf = t*X\ng = Y\n").unwrap();
    let out = run_command(["reflectomap", "verify", "--map", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("`t`"));
}

#[test]
fn binary_exit_codes_and_threads() {
    let bin = env!("CARGO_BIN_EXE_reflectomap");
    let out = Command::new(bin)
        .args(["verify", "--family", "F5"])
        .env("REFLECTOMAP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["overall"], "pass");

    let out = Command::new(bin).args(["verify", "--family", "F5"]).env("REFLECTOMAP_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("transfer"));
}
