#![cfg(feature = "cli")]

use std::process::{Command, Output};

fn symwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("strict JSON")
}

#[test]
fn bound_example() {
    let v = json(&symwit(&["bound", "--n", "4", "--alpha", "1", "--beta", "0", "--gamma", "0", "--theta", "0"]));
    assert_eq!(v["result"]["value"].as_f64(), Some(6.0));
    assert_eq!(v["header"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn tcrit_example() {
    let v = json(&symwit(&["tcrit", "--n", "4", "--h", "0.01"]));
    let t = v["result"]["t_crit"].as_f64().unwrap();
    assert!((t - 0.541).abs() <= 0.005, "{t}");
}

#[test]
fn dicke_sweep_trends() {
    let v = json(&symwit(&["dicke-sweep", "--n-min", "3", "--n-max", "30"]));
    let trends = &v["result"]["trends"];
    assert_eq!(trends["all_negative"], true);
    assert_eq!(trends["even_nonincreasing"], true);
    assert_eq!(trends["odd_nondecreasing"], true);
    assert_eq!(v["result"]["records"].as_array().unwrap().len(), 28);
}

#[test]
fn csv_schemas() {
    let out = symwit(&["omega-scan", "--n", "10", "--grid", "7", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "omega,min_expectation,alpha,beta,gamma,angles");
    assert_eq!(body.len(), 8);

    let out = symwit(&["thermal-scan", "--n", "4", "--h", "0.01", "--grid", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "T,min_expectation,s00,s01,s11");
}

#[test]
fn output_is_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    let path = dir.path().join("run.json");
    for workers in ["1", "3", "1"] {
        let out = symwit(&[
            "optimize", "--n", "7", "--state", "squeezed", "--chi", "0.3", "--general", "--workers", workers,
            "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    let a = symwit(&["polytope", "--n", "3", "--compare", "--theta", "1.0471975511965976", "--workers", "2"]);
    let b = symwit(&["polytope", "--n", "3", "--compare", "--theta", "1.0471975511965976"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!json(&a)["result"]["protrusions"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let out = symwit(&["bound", "--n", "4", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(symwit(&["theta-window"]).status.code(), Some(2));
    assert_eq!(symwit(&["expect", "--n", "4", "--k", "9", "--alpha", "1", "--beta", "0", "--gamma", "0"]).status.code(), Some(1));
    assert_eq!(symwit(&["tcrit", "--n", "13", "--h", "0.01"]).status.code(), Some(1));
    assert_eq!(symwit(&["region", "--n", "4", "--out", "/nonexistent-dir/r.json"]).status.code(), Some(1));
}

#[test]
fn region_export_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.json");
    let out = symwit(&["region", "--n", "4", "--theta", "0.5", "--directions", "40", "--hull", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let region = &v["result"];
    assert_eq!(region["n_qubits"], 4);
    assert_eq!(region["halfspaces"].as_array().unwrap().len(), 40);
    assert!(region["polytope_vertices"][0][0].is_i64());
    assert_eq!(region["states"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_records_seed() {
    let v = json(&symwit(&["verify", "--max-n", "4", "--draws", "20", "--products", "100", "--seed", "17"]));
    assert_eq!(v["header"]["seed"], 17);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn theta_window_command() {
    let v = json(&symwit(&["theta-window", "--n", "100", "--alpha", "-1", "--beta", "-1.13", "--gamma", "1.14"]));
    let hi = v["result"]["primary"][1].as_f64().unwrap();
    assert!((hi - 0.196).abs() < 0.005);
}
