use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lab")).args(args).current_dir(dir).env_remove("LAB_CACHE_DIR").output().unwrap()
}

fn write_config(dir: &Path, name: &str, config: Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn summary(dir: &Path, out: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(out).join("summary.json")).unwrap()).unwrap()
}

fn csv(dir: &Path, out: &str) -> String {
    fs::read_to_string(dir.join(out).join("steps.csv")).unwrap()
}

#[test]
fn converge_cyclic_figure_eight_reaches_the_measure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig8.json",
        json!({
            "kind": "converge_cyclic",
            "input": "figure_eight",
            "output": "fig8",
            "schedule": {"kind": "cyclic", "ns": [1, 2, 3, 4, 5, 50, 100, 200, 400]},
            "tolerance": 0.02
        }),
    );
    let out = lab(&["run", &cfg, "--jobs", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "fig8");
    assert!((s["target"].as_f64().unwrap() - 0.9624236501).abs() < 1e-9);
    assert!(s["gap"].as_f64().unwrap() < 0.02);
    assert_eq!(s["within_tolerance"], true);
    assert_eq!(s["failed_steps"], json!([]));
    let text = csv(dir.path(), "fig8");
    let orders: Vec<&str> = text.lines().skip(1).take(5).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(orders, ["1", "5", "16", "45", "121"]);
}

#[test]
fn reruns_are_byte_identical_and_cache_matches_fresh_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = json!({
        "kind": "converge_gpm",
        "input": {"polynomial": "1 + t1 + t2"},
        "output": "gpm",
        "schedule": {"kind": "gpm", "steps": [[3, 20], [5, 101], [5, 211]]}
    });
    let cfg = write_config(dir.path(), "gpm.json", config);
    assert_eq!(lab(&["run", &cfg], dir.path()).status.code(), Some(0));
    let first = (csv(dir.path(), "gpm"), fs::read(dir.path().join("gpm/summary.json")).unwrap());
    let again = lab(&["run", &cfg], dir.path());
    assert!(String::from_utf8_lossy(&again.stderr).contains("3 cached, 0 computed"));
    assert_eq!(first, (csv(dir.path(), "gpm"), fs::read(dir.path().join("gpm/summary.json")).unwrap()));
    let fresh = dir.path().join("fresh-cache");
    let out = lab(&["run", &cfg, "--cache", fresh.to_str().unwrap()], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 cached, 3 computed"));
    assert_eq!(first.0, csv(dir.path(), "gpm"));
    assert_eq!(fs::read_dir(&fresh).unwrap().count(), 3);
    let s = summary(dir.path(), "gpm");
    assert!(!s["warnings"].as_array().unwrap().is_empty(), "M = 20 is below the alpha bound");
    assert!((s["target"].as_f64().unwrap() - 0.3230659472).abs() < 1e-5);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env-cache");
    let cfg = write_config(dir.path(), "m.json", json!({"kind": "mahler", "input": {"polynomial": "1 + t1 + t2"}, "output": "m"}));
    let out = Command::new(env!("CARGO_BIN_EXE_lab")).args(["run", &cfg]).env("LAB_CACHE_DIR", &cache).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let s = summary(dir.path(), "m");
    let v = s["limit_estimate"].as_f64().unwrap();
    let budget = s["details"]["error_budget"].as_f64().unwrap();
    assert!((v - 0.3230659472).abs() <= budget.max(1e-6), "{v} +- {budget}");
    assert_eq!(csv(dir.path(), "m").lines().count(), 2);
}

#[test]
fn null_alexander_module_cover() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "null.json",
        json!({
            "kind": "cover_homology",
            "input": {"presentation": {"gens": 2, "rels": 2, "matrix": [["0", "0"], ["0", "t1^2 - 3*t1 + 1"]]}},
            "output": "null",
            "schedule": {"kind": "cyclic", "ns": [5]}
        }),
    );
    assert_eq!(lab(&["run", &cfg], dir.path()).status.code(), Some(0));
    assert_eq!(csv(dir.path(), "null").lines().nth(1).unwrap(), "5,5,5,5,121,9.59158109119e-1");
}

#[test]
fn partial_failure_lists_steps_and_keeps_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    // t^2 - t + 1 vanishes at sixth roots of unity.
    let cfg = write_config(
        dir.path(),
        "tref.json",
        json!({
            "kind": "converge_cyclic",
            "input": "trefoil",
            "output": "tref",
            "route": "resultant",
            "schedule": {"kind": "cyclic", "ns": [5, 6, 7]}
        }),
    );
    let out = lab(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let s = summary(dir.path(), "tref");
    assert_eq!(s["failed_steps"].as_array().unwrap().len(), 1);
    assert_eq!(s["failed_steps"][0]["param"], "6");
    assert_eq!(csv(dir.path(), "tref").lines().count(), 3);
    assert_eq!(fs::read_dir(dir.path().join("tref/.cache")).unwrap().count(), 2);

    let cfg = write_config(
        dir.path(),
        "empty.json",
        json!({"kind": "converge_cyclic", "input": "trefoil", "output": "empty", "route": "resultant",
               "schedule": {"kind": "cyclic", "ns": [6]}}),
    );
    assert_eq!(lab(&["run", &cfg], dir.path()).status.code(), Some(2));
    assert_eq!(csv(dir.path(), "empty"), format!("{}\n", abtorsion::covers::CSV_HEADER));
}

#[test]
fn usage_and_input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lab(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(lab(&["run"], dir.path()).status.code(), Some(1));
    assert_eq!(lab(&["run", "missing.json"], dir.path()).status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"kind\": \"mahler\"").unwrap();
    assert_eq!(lab(&["run", bad.to_str().unwrap()], dir.path()).status.code(), Some(1));
    let cfg = write_config(dir.path(), "nofix.json", json!({"kind": "alexander", "input": "unknot", "output": "o"}));
    let out = lab(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknot"));
    assert_eq!(lab(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn one_shot_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["fixtures", "list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["trefoil", "figure_eight", "hopf_link", "circle", "whitehead_link"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
    let out = lab(&["mahler", "t1^2 - 3*t1 + 1", "--method", "jensen_roots"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.962423650119).abs() < 1e-11);
    let out = lab(&["mahler", "1 + t1 + t2", "--method", "torus_grid"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.3230659472).abs() < 1e-3);
    assert_eq!(lab(&["mahler", "1 + t1", "--method", "nope"], dir.path()).status.code(), Some(1));
    assert_eq!(lab(&["mahler", "0"], dir.path()).status.code(), Some(2));
    let m = dir.path().join("m.json");
    fs::write(&m, "[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]").unwrap();
    let out = lab(&["snf", m.to_str().unwrap()], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["divisors"], json!(["2", "6", "12"]));
}

#[test]
fn remaining_experiment_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "alex.json", json!({"kind": "alexander", "input": "whitehead_link", "output": "alex"}));
    assert_eq!(lab(&["run", &cfg], dir.path()).status.code(), Some(0));
    let s = summary(dir.path(), "alex");
    assert_eq!(s["details"]["first_nonzero"], 1);
    assert_eq!(csv(dir.path(), "alex").lines().nth(1).unwrap(), "0,0");

    let cfg = write_config(
        dir.path(),
        "fk.json",
        json!({
            "kind": "fkdet_approx",
            "input": {"matrix": {"num_vars": 2, "rows": 2, "cols": 2, "entries": [["1 - 2*t1", "1"], ["0", "1 - 2*t2"]]}},
            "output": "fk",
            "schedule": {"kind": "gpm", "steps": [[3, 101], [5, 211]]}
        }),
    );
    let out = lab(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "fk");
    assert!((s["target"].as_f64().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);
    assert!(s["gap"].as_f64().unwrap() < 0.05);

    let cfg = write_config(
        dir.path(),
        "betti.json",
        json!({
            "kind": "betti_deviation",
            "input": "hopf_link",
            "output": "betti",
            "lattices": [[[2, 0], [0, 3]], [[4, 1], [0, 5]]],
            "constant": 4.0
        }),
    );
    let out = lab(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "betti");
    assert_eq!(s["details"]["violations"], 0);
    assert_eq!(csv(dir.path(), "betti").lines().count(), 1 + 2 * 3);
}
