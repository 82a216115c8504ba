use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blocksmith")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("error json on stderr")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = run(&["construct", "--code", "rs:q=5,n=6,k=3", "--graph", "cycle:6", "--out", path_str(&cert)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(v["points"].as_array().unwrap().len() <= 30);
    assert_eq!(v["checks"]["strong"], "passed");
    assert_eq!(v["metadata"]["seed"], "0");
    let out = run(&["verify", "--cert", path_str(&cert)]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["consistent"], true);
}

#[test]
fn hypothesis_failure_exits_2() {
    let out = run(&["construct", "--code", "rs:q=5,n=6,k=3", "--graph", "empty:6"]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"], "IntegrityHypothesisUnmet");
    assert!(out.stdout.is_empty());
}

#[test]
fn argument_errors_exit_1() {
    let out = run(&["construct", "--code", "rs:q=5,n=6,k=3", "--graph", "lps:p=5,r=13"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_json(&out)["exit_code"], 1);
    for args in [
        &["construct", "--code", "rs:q=6,n=6,k=3", "--graph", "cycle:6"][..],
        &["construct", "--code", "reed:q=5", "--graph", "cycle:6"],
        &["verify", "--cert", "/nonexistent/cert.json"],
        &["tables", "--table", "4"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 1, "{args:?}");
        stderr_json(&out);
    }
}

#[test]
fn unverifiable_at_small_caps_exits_3() {
    let out = run(&[
        "construct",
        "--code",
        "rs:q=5,n=6,k=3",
        "--graph",
        "cycle:6",
        "--hyperplane-cap",
        "5",
        "--codim2-cap",
        "5",
    ]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["strong"], "skipped");
}

#[test]
fn tampered_certificate_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    run(&["construct", "--code", "rs:q=5,n=6,k=3", "--graph", "cycle:6", "--out", path_str(&cert)]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["points"].as_array_mut().unwrap().pop();
    v["size"]["points"] = (v["size"]["points"].as_u64().unwrap() - 1).into();
    std::fs::write(&cert, v.to_string()).unwrap();
    let out = run(&["verify", "--cert", path_str(&cert)]);
    assert_eq!(code(&out), 4);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["consistent"], false);
}

#[test]
fn derive_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.json");
    let first = dir.path().join("d1.json");
    let out = run(&[
        "derive",
        "--code",
        "identity:q=16,k=3",
        "--graph",
        "complete:3",
        "--source-out",
        path_str(&src),
        "--out",
        path_str(&first),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let d1: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!((d1["ambient"]["k"].as_u64(), d1["ambient"]["q"].as_u64()), (Some(6), Some(4)));
    assert_eq!(code(&run(&["verify", "--cert", path_str(&first)])), 0);
    // one more step from the stored certificate lands in PG(11, 2)
    let second = dir.path().join("d2.json");
    let out = run(&["derive", "--cert", path_str(&first), "--out", path_str(&second)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let d2: Value = serde_json::from_str(&std::fs::read_to_string(&second).unwrap()).unwrap();
    assert_eq!((d2["ambient"]["k"].as_u64(), d2["ambient"]["q"].as_u64()), (Some(12), Some(2)));
    assert_eq!(code(&run(&["verify", "--cert", path_str(&second)])), 0);
    // GF(2) cannot be reduced further
    assert_eq!(code(&run(&["derive", "--cert", path_str(&second)])), 1);
}

#[test]
fn tables_csv_has_the_anchor_row() {
    let out = run(&["tables", "--table", "1"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "q");
    let row = reader.records().map(Result::unwrap).find(|r| &r[0] == "9").unwrap();
    assert_eq!((&row[1], &row[2]), ("85", "292.68"));
    let constants = run(&["tables", "--table", "constants", "--format", "json"]);
    let v: Value = serde_json::from_slice(&constants.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn graph_report_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    std::fs::write(&edges, "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let spec = format!("file:{}", path_str(&edges));
    let out = run(&["graph", &spec, "--spectrum", "--integrity", "--z"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["integrity"]["value"], 4);
    assert_eq!(v["z"]["value"], 1);
    assert_eq!(v["spectrum"]["ramanujan"], true);
    let json = dir.path().join("g.json");
    std::fs::write(&json, r#"{"n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
    let out = run(&["graph", &format!("file:{}", path_str(&json))]);
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["edges"], 2);
}

#[test]
fn config_file_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"seed": 11, "caps": {"z_guard": 12}}"#).unwrap();
    let cfg = path_str(&cfg);
    let out = run(&["--config", cfg, "appendix", "upper", "--n", "20", "--d", "3"]);
    assert_eq!(code(&out), 5);
    assert_eq!(stderr_json(&out)["error"], "TooLarge");
    let out = run(&["--config", cfg, "--z-guard", "30", "appendix", "upper", "--n", "12", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["seed"], 11);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"caps": {"hyperplanes": 0}}"#).unwrap();
    assert_eq!(code(&run(&["--config", path_str(&bad), "tables", "--table", "2"])), 1);
}

#[test]
fn outputs_are_reproducible() {
    let args = ["construct", "--code", "random:q=3,k=3,n=7", "--graph", "regular:n=7,d=4", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
    let lower = ["appendix", "lower", "--graph", "gnp:n=200,p=0.02", "--d", "8", "--seed", "4"];
    let (x, y) = (run(&lower), run(&lower));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn thread_override_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_blocksmith"))
        .args(["tables", "--table", "2"])
        .env("BLOCKSMITH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let out = Command::new(env!("CARGO_BIN_EXE_blocksmith"))
        .args(["tables", "--table", "2"])
        .env("BLOCKSMITH_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}
