//! End-to-end tests of the `npk` binary: documented outputs, exit codes,
//! and JSON round-tripping through command pipelines.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn npk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn generator_3x3_json() -> &'static str {
    r#"{"m": 4, "rows": [["1", "0", "0"], ["0", "0", {"m": 4, "c": ["0", "1"]}], ["0", {"m": 4, "c": ["0", "1"]}, "-1"]]}"#
}

#[test]
fn verify_generator_quadripotent() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_file(dir.path(), "e.json", generator_3x3_json());
    let out = npk(&["verify", "--n", "4", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), r#"{"n":4,"npotent":true}"#);
    let out = npk(&["verify", "--n", "4", "--pretty", m.to_str().unwrap()]);
    assert_eq!(stdout(&out), "n-potent: true");
    // the same matrix is not idempotent
    let out = npk(&["verify", "--n", "2", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), r#"{"n":2,"npotent":false}"#);
}

#[test]
fn group_strings() {
    for (n, field, expected) in [
        ("2", "4", "Z"),
        ("3", "4", "Z (+) Z"),
        ("4", "4", "Z (+) 2Z"),
        ("5", "4", "Z (+) Z (+) Z (+) Z"),
        ("4", "3", "Z (+) Z (+) Z"),
    ] {
        let out = npk(&["group", "--n", n, "--field", field]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), expected, "n={n} field={field}");
    }
}

#[test]
fn class_of_generator() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_file(dir.path(), "e.json", generator_3x3_json());
    let out = npk(&["class", "--n", "4", "--field", "4", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), r#"{"orbits":[[1],[2,3]],"values":[1,2]}"#);
}

#[test]
fn decompose_recompose_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_file(dir.path(), "e.json", generator_3x3_json());
    let out = npk(&["decompose", "--n", "4", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let part = write_file(dir.path(), "part.json", &stdout(&out));
    let out = npk(&["recompose", part.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // the recomposed matrix equals the input lifted to the splitting field
    let original: npk::exactmat::CycMatrix = serde_json::from_str(generator_3x3_json()).unwrap();
    let back: npk::exactmat::CycMatrix = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(back, original.lift(12).unwrap());
}

#[test]
fn emitted_json_reparses_equal() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["random", "--n", "4", "--field", "4", "--size", "3", "--ranks", "0,1,1,1", "--seed", "5"],
        vec!["representative", "--n", "4", "--field", "4", "--values", "1,2"],
        vec!["representative", "--n", "5", "--field", "1", "--values", "1,2,3"],
    ] {
        let out = npk(&args);
        assert_eq!(out.status.code(), Some(0), "args {args:?}");
        let text = stdout(&out);
        let m: npk::exactmat::CycMatrix = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string(&m).unwrap();
        assert_eq!(again, text, "args {args:?}");
    }
    // pipeline: representative written to file, fed back through class
    let out = npk(&["representative", "--n", "4", "--field", "4", "--values", "2,4"]);
    let rep = write_file(dir.path(), "rep.json", &stdout(&out));
    let out = npk(&["class", "--n", "4", "--field", "4", rep.to_str().unwrap()]);
    assert_eq!(stdout(&out), r#"{"orbits":[[1],[2,3]],"values":[2,4]}"#);
}

#[test]
fn random_is_deterministic() {
    let args = ["random", "--n", "3", "--field", "4", "--size", "4", "--ranks", "1,2,1", "--seed", "9"];
    let a = npk(&args);
    let b = npk(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let c = npk(&["random", "--n", "3", "--field", "4", "--size", "4", "--ranks", "1,2,1", "--seed", "10"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn witness_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = npk(&["random", "--n", "4", "--field", "4", "--size", "3", "--ranks", "0,1,1,1", "--seed", "2"]);
    let e = write_file(dir.path(), "e.json", &stdout(&out));
    let z = write_file(
        dir.path(),
        "z.json",
        r#"{"m": 1, "rows": [["1", "1", "0"], ["0", "1", "-2"], ["0", "0", "1"]]}"#,
    );
    let out = npk(&["witness", "from-similarity", "--n", "4", e.to_str().unwrap(), z.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let w = write_file(dir.path(), "w.json", &stdout(&out));
    let out = npk(&["witness", "check", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "VERIFIED");
    // normalize then promote to a block similarity
    let out = npk(&["witness", "normalize", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let wn = write_file(dir.path(), "wn.json", &stdout(&out));
    let out = npk(&["witness", "stable", wn.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let ws = write_file(dir.path(), "ws.json", &stdout(&out));
    let out = npk(&["witness", "check", ws.to_str().unwrap()]);
    assert_eq!(stdout(&out), "VERIFIED");
    // tampering is caught with the failing identity named
    let mut tampered: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    tampered["a"]["rows"][0][0] = serde_json::Value::String("99".into());
    let bad = write_file(dir.path(), "bad.json", &tampered.to_string());
    let out = npk(&["witness", "check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).starts_with("FAILED:"), "{}", stdout(&out));
}

#[test]
fn witness_closeness_respects_precision_env() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_file(dir.path(), "e.json", generator_3x3_json());
    let out = Command::new(env!("CARGO_BIN_EXE_npk"))
        .args(["witness", "closeness", "--n", "4", m.to_str().unwrap(), m.to_str().unwrap()])
        .env("NPK_PRECISION_BITS", "53")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(report["within"], serde_json::Value::Bool(true));
    assert_eq!(report["distance"], serde_json::json!(0.0));
}

#[test]
fn nhom_commands() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "spec.json",
        r#"{"n": 3, "source_m": 1, "target_m": 1, "matrix": [["-1"]]}"#,
    );
    let out = npk(&["nhom-check", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), r#"{"n":3,"nhom":true}"#);
    // the same scalar fails as a 2-homomorphism
    let spec2 = write_file(
        dir.path(),
        "spec2.json",
        r#"{"n": 2, "source_m": 1, "target_m": 1, "matrix": [["-1"]]}"#,
    );
    let out = npk(&["nhom-check", spec2.to_str().unwrap()]);
    assert_eq!(stdout(&out), r#"{"n":2,"nhom":false}"#);
    // entrywise application preserves tripotency
    let t = write_file(dir.path(), "t.json", r#"{"m": 1, "rows": [["1", "0"], ["0", "-1"]]}"#);
    let out = npk(&["nhom-apply", spec.to_str().unwrap(), t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), r#"{"m":1,"rows":[["-1","0"],["0","1"]]}"#);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // 1: unreadable input
    let out = npk(&["decompose", "--n", "2", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    // 1: parse error
    let bad = write_file(dir.path(), "bad.json", "not json");
    let out = npk(&["decompose", "--n", "2", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // 1: bad flags
    let out = npk(&["group", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    // 2: not an n-potent
    let unip = write_file(dir.path(), "u.json", r#"{"m": 1, "rows": [["1", "1"], ["0", "1"]]}"#);
    let out = npk(&["decompose", "--n", "2", unip.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // 3: field violation
    let z3 = write_file(dir.path(), "z3.json", r#"{"m": 3, "rows": [[{"m": 3, "c": ["0", "1"]}]]}"#);
    let out = npk(&["class", "--n", "4", "--field", "4", z3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    // 3: folded-orbit violation surfaces from representative targets
    let out = npk(&["representative", "--n", "4", "--field", "4", "--values", "1,1"]);
    assert_eq!(out.status.code(), Some(1)); // divisibility is a class-signature error
    // 0: help
    let out = npk(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn complement_and_splits() {
    let dir = tempfile::tempdir().unwrap();
    let e = write_file(dir.path(), "e.json", r#"{"m": 1, "rows": [["1", "0"], ["0", "0"]]}"#);
    let out = npk(&["complement", "--n", "2", e.to_str().unwrap()]);
    assert_eq!(stdout(&out), r#"{"m":1,"rows":[["0","0"],["0","1"]]}"#);
    let t = write_file(dir.path(), "t.json", r#"{"m": 1, "rows": [["1", "0"], ["0", "-1"]]}"#);
    let out = npk(&["split3", t.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["e1"]["rows"][0][0], "1");
    assert_eq!(v["e2"]["rows"][1][1], "1");
    let g = write_file(dir.path(), "g.json", generator_3x3_json());
    let out = npk(&["split4", g.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["traces"], serde_json::json!(["1", "2"]));
}

#[test]
fn check_paper_smoke() {
    // full battery through the binary; keep the default seed
    let out = npk(&["check-paper", "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("10/10 checks passed"), "{text}");
    assert!(text.contains("group-table"));
    // JSON mode re-parses
    let out = npk(&["check-paper"]);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 10);
}
