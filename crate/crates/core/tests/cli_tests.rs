//! The `spheregate` binary: exit codes, output formats, schemas.

mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use common::assert_schema;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spheregate"));
    c.env_remove("SPHEREGATE_AXIOMS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn manifest(name: &str) -> String {
    format!("{}/manifests/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spheregate-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_outputs_match_schema() {
    for (spec, dim, status) in
        [("Alt(5)", "4", "not excluded"), ("PSL2(7)", "4", "excluded"), ("Alt(6)", "3", "excluded"), ("SL2(5)", "3", "not excluded")]
    {
        let v = json_ok(&["check", spec, "--sphere-dim", dim]);
        assert_schema("verdict", &v);
        assert_eq!(v["status"], status, "{spec} in dim {dim}");
    }
}

#[test]
fn analyze_classify_dimfn_match_schema() {
    for spec in ["Alt(5)", "Meta(7,3,2)", "SignedEven(5)"] {
        assert_schema("analyze", &json_ok(&["analyze", spec]));
    }
    for spec in ["Sym(6)", "SignedEven(5)", "PGL2(9)"] {
        assert_schema("classify", &json_ok(&["classify", spec]));
    }
    let d = json_ok(&["dimfn", "--p", "2", "--rank", "2"]);
    assert_schema("dimfn", &d);
    assert_eq!(d["solution_count"], 7);
    let u = json_ok(&["dimfn", "--p", "2", "--rank", "3", "--uniform-color"]);
    assert_schema("dimfn", &u);
    assert_eq!(u["solution_count"], 0);
}

#[test]
fn survey_json_and_csv() {
    let v = json_ok(&["survey", &manifest("witnesses.json")]);
    assert_schema("survey", &v);
    assert_eq!(v["survivors"].as_array().unwrap().len(), 7);
    let out = run(&["survey", &manifest("psl2_scan.json"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["label", "spec", "order", "simple", "status", "violated", "error"]);
    let survivors: Vec<String> = rd
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[4] == "not excluded")
        .map(|r| r[1].to_string())
        .collect();
    assert_eq!(survivors, ["PSL2(2)", "PSL2(3)", "PSL2(4)", "PSL2(5)", "PSL2(9)"]);
}

#[test]
fn text_format() {
    let out = run(&["check", "PSL2(8)", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("excluded") && s.contains("R-BOREL"), "{s}");
}

#[test]
fn exit_codes() {
    // bad spec, unknown rule, clap usage error
    assert_eq!(run(&["check", "PSL2(6)"]).status.code(), Some(2));
    assert_eq!(run(&["check", "Alt(5)", "--no-rule", "R-NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // cap exceeded
    let out = run(&["check", "Alt(6)", "--order-cap", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    // unwritable output path
    assert_eq!(run(&["check", "Alt(5)", "--out", "/nonexistent-dir/x.json"]).status.code(), Some(1));
    // missing manifest
    assert_ne!(run(&["survey", "/nonexistent-dir/m.json"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("verdict.json");
    let out = run(&["check", "SL2(9)", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("verdict", &v);
    assert_eq!(v["status"], "excluded");
}

#[test]
fn disabled_rules_are_skipped() {
    let v = json_ok(&["check", "PSL2(7)", "--no-rule", "R-META"]);
    let f = v["trace"].as_array().unwrap().iter().find(|f| f["rule"] == "R-META").unwrap();
    assert_eq!(f["outcome"], "skipped");
    assert_eq!(f["witness"]["reason"], "disabled");
}

/// Bundled table with `A6` allowed in dimension 3.
fn permissive_axioms() -> PathBuf {
    let bundled = format!("{}/data/axioms.json", env!("CARGO_MANIFEST_DIR"));
    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(bundled).unwrap()).unwrap();
    let s3 = t["sphere3"].as_array_mut().unwrap();
    s3.retain(|e| e["id"] != "S3-A6");
    for e in s3.iter_mut().filter(|e| e["id"] == "S3-SIMPLE") {
        e["allowed"].as_array_mut().unwrap().push("Alt(6)".into());
    }
    let path = scratch("axioms.json");
    std::fs::write(&path, serde_json::to_string_pretty(&t).unwrap()).unwrap();
    path
}

#[test]
fn axiom_table_override() {
    let path = permissive_axioms();
    let base = json_ok(&["check", "Alt(6)", "--sphere-dim", "3"]);
    assert_eq!(base["status"], "excluded");
    let flag = json_ok(&["check", "Alt(6)", "--sphere-dim", "3", "--axioms", path.to_str().unwrap()]);
    assert_eq!(flag["status"], "not excluded");
    let out = bin().args(["check", "Alt(6)", "--sphere-dim", "3"]).env("SPHEREGATE_AXIOMS", &path).output().unwrap();
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["status"], "not excluded");
    // malformed table is a configuration error
    let bad = scratch("bad-axioms.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["check", "Alt(5)", "--axioms", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run(&["survey", &manifest("witnesses.json"), "--threads", "1"]).stdout;
    let b = run(&["survey", &manifest("witnesses.json"), "--threads", "4"]).stdout;
    assert_eq!(a, b);
}
