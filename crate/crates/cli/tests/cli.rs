use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn id_forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_id-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const MONO_PARAMS: &str = r#"{"identity":"3; 0-1,0-2,1-2","kappa":3,"lambda":1,"g":[2],"f":[1]}"#;

#[test]
fn identity_counts() {
    for (r, n) in [("2", 1), ("3", 3), ("4", 25)] {
        let o = id_forge(&["--format", "json", "identities", "--r", r]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_eq!(v["count"], n);
        assert_eq!(v["schemaVersion"], 1);
    }
    let o = id_forge(&["--format", "json", "identities", "--r", "3", "--mode", "j", "--depth", "4"]);
    assert_eq!(json(&o)["count"], 2);
    let table = id_forge(&["identities", "--r", "3"]);
    assert!(String::from_utf8_lossy(&table.stdout).starts_with("3 identities of size 3"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&id_forge(&["identities", "--r", "9"])), 2);
    assert_eq!(code(&id_forge(&["identities", "--r", "3", "--mode", "j", "--depth", "0"])), 2);
    assert_eq!(code(&id_forge(&["no-such-command"])), 2);
    assert_eq!(code(&id_forge(&["verify", "/nonexistent/witness.json"])), 2);
    assert_eq!(code(&id_forge(&["--threads", "0", "identities", "--r", "2"])), 2);
}

#[test]
fn check_reports_realization() {
    let dir = TempDir::new().unwrap();
    // triangle with one odd edge, and a path of two equal edges
    let a = put(&dir, "a.txt", "0 1 1\n0 2 2\n1 2 2\n");
    let b = put(&dir, "b.txt", "# comment\n0 1 7\n");
    let o = id_forge(&["--format", "json", "check", &a, &b]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["aRealizesB"], true);
    assert_eq!(v["bRealizesA"], false);
    assert_eq!(v["equivalent"], false);
}

#[test]
fn search_verify_and_failure_codes() {
    let dir = TempDir::new().unwrap();
    let params = put(&dir, "p.json", MONO_PARAMS);
    let out = dir.path().join("w.json");
    let o = id_forge(&["search", &params, "--budget", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = id_forge(&["--format", "json", "verify", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);

    let single = put(
        &dir,
        "single.json",
        r#"{"identity":"3; 0-1,0-2,1-2","kappa":3,"lambda":2,"g":[1,1],"f":[1,1]}"#,
    );
    let o = id_forge(&["--format", "json", "search", &single, "--budget", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["found"], false);

    // all pairs share one generator: C5 fails
    let bad = r#"{"identity":"3; 0-1,0-2,1-2","kappa":3,"lambda":1,"g":[2],"f":[1],"entries":[
        {"w":[0,1],"L":1,"gens":[0],"terms":[2,1]},
        {"w":[0,2],"L":1,"gens":[0],"terms":[2,1]},
        {"w":[1,2],"L":1,"gens":[0],"terms":[2,1]}]}"#;
    let bad = put(&dir, "bad.json", bad);
    let o = id_forge(&["--format", "json", "verify", &bad]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["report"]["c5"], "fail");
    assert_eq!(v["report"]["c5_instances"][0]["measure"], "1/2^0");

    let oversized = put(
        &dir,
        "big.json",
        r#"{"identity":"3; 0-1,0-2,1-2","kappa":5,"lambda":1,"g":[2],"f":[1]}"#,
    );
    assert_eq!(code(&id_forge(&["search", &oversized])), 2);
}

#[test]
fn encode_decode_pipeline() {
    let dir = TempDir::new().unwrap();
    let params = put(&dir, "p.json", MONO_PARAMS);
    let cnf = dir.path().join("f.cnf");
    let model = dir.path().join("f.model");
    let witness = dir.path().join("w.json");
    let o = id_forge(&[
        "--format",
        "json",
        "encode",
        &params,
        "--out",
        cnf.to_str().unwrap(),
        "--model-out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["status"], "sat");
    assert_eq!(v["pool"], 48);
    assert!(fs::read_to_string(&cnf).unwrap().starts_with("c params "));
    let o = id_forge(&[
        "decode",
        cnf.to_str().unwrap(),
        model.to_str().unwrap(),
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&id_forge(&["verify", witness.to_str().unwrap()])), 0);

    let unsat = put(&dir, "u.model", "s UNSATISFIABLE\n");
    assert_eq!(code(&id_forge(&["decode", cnf.to_str().unwrap(), &unsat])), 1);
}

#[test]
fn unsat_encoding_exits_1() {
    let dir = TempDir::new().unwrap();
    let params = put(
        &dir,
        "p.json",
        r#"{"identity":"3; 0-1,0-2|1-2","kappa":3,"lambda":1,"g":[2],"f":[1]}"#,
    );
    let model = dir.path().join("m.txt");
    let o = id_forge(&["encode", &params, "--model-out", model.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(fs::read_to_string(model).unwrap(), "s UNSATISFIABLE\n");
}

#[test]
fn sample_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let params = put(&dir, "p.json", MONO_PARAMS);
    let w = dir.path().join("w.json");
    assert_eq!(code(&id_forge(&["search", &params, "--out", w.to_str().unwrap()])), 0);
    let run = || id_forge(&["--format", "json", "sample", w.to_str().unwrap(), "--trials", "2000", "--seed", "9"]);
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["realization"]["trials"], 2000);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    // seed is required
    assert_eq!(code(&id_forge(&["sample", w.to_str().unwrap()])), 2);
}

#[test]
fn json_output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let params = put(&dir, "p.json", MONO_PARAMS);
    let a = id_forge(&["--format", "json", "search", &params]);
    let b = id_forge(&["--format", "json", "--threads", "1", "search", &params]);
    assert_eq!(a.stdout, b.stdout);
}
