use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const D_EX: &str = r#"{"elements":["a","b","c","d"],"feasible":[[],["a"],["b"],["c"],["d"],["a","b"],["c","d"],["a","b","c"],["a","b","d"],["a","c","d"],["b","c","d"]]}"#;
const BAD: &str = r#"{"elements":["a","b","c"],"feasible":[[],["a"],["c"],["b","c"]]}"#;
const THETA: &str = r#"{"vertices":[["a0","b0","e0"],["a1","e1","b1"]],"edges":{"a":{"halves":["a0","a1"],"twisted":false},"b":{"halves":["b0","b1"],"twisted":false},"e":{"halves":["e0","e1"],"twisted":true}}}"#;

fn mmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmkit")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_paper_q() {
    let out = mmkit(&["check", "paper-q"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["details"]["bases"], 50);
}

#[test]
fn examples_run() {
    for name in ["paper-q", "ribbon-counterexample"] {
        assert_eq!(mmkit(&["example", name]).status.code(), Some(0), "{name}");
    }
    assert_eq!(mmkit(&["example", "unknown"]).status.code(), Some(2));
}

#[test]
fn props_of_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "dex.json", D_EX);
    let out = mmkit(&["props", s(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["even"], false);
    assert_eq!(v["connected"], true);
    assert_eq!(v["vf_safe"], true);
    assert_eq!(v["tight"], false);
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", D_EX);
    let bad = write(&dir, "bad.json", BAD);
    let broken = write(&dir, "broken.json", "{");
    assert_eq!(mmkit(&["validate", s(&good)]).status.code(), Some(0));
    let out = mmkit(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witnesses"][0]["x"], "b");
    assert_eq!(mmkit(&["validate", s(&broken)]).status.code(), Some(2));
}

#[test]
fn minor_with_unknown_label_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "dex.json", D_EX);
    let out = mmkit(&["minor", s(&file), "--delete", "z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn written_structures_reparse_and_validate() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "dex.json", D_EX);
    let minor = dir.path().join("minor.json");
    let q2 = dir.path().join("q2.json");
    let q3 = dir.path().join("q3.json");
    let out = mmkit(&["minor", s(&file), "--delete", "a", "--contract", "b", "-o", s(&minor)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(mmkit(&["q2", s(&file), "-o", s(&q2)]).status.code(), Some(0));
    assert_eq!(mmkit(&["q3", s(&file), "-o", s(&q3)]).status.code(), Some(0));
    for path in [&minor, &q2, &q3] {
        assert_eq!(mmkit(&["validate", s(path)]).status.code(), Some(0), "{}", path.display());
    }
    let q3v: Value = serde_json::from_str(&fs::read_to_string(&q3).unwrap()).unwrap();
    assert_eq!(q3v["bases"].as_array().unwrap().len(), 50);
}

#[test]
fn section_recovers_the_delta_matroid() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "dex.json", D_EX);
    let q2 = dir.path().join("q2.json");
    mmkit(&["q2", s(&file), "-o", s(&q2)]);
    let out = mmkit(&["section", s(&q2), "--transversal", "a", "b", "c", "d"]);
    assert_eq!(out.status.code(), Some(0));
    let want: Value = serde_json::from_str(D_EX).unwrap();
    let got = json(&out);
    assert_eq!(got["feasible"].as_array().unwrap().len(), want["feasible"].as_array().unwrap().len());
    let primed = mmkit(&["section", s(&q2), "--transversal", "a'", "b", "c", "d"]);
    assert_eq!(json(&primed)["elements"][0], "a'");
}

#[test]
fn ribbon_delta_matroid_and_props() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "theta.json", THETA);
    let out = mmkit(&["ribbon-dm", s(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["elements"], serde_json::json!(["a", "b", "e"]));
    let props = json(&mmkit(&["props", s(&file)]));
    assert_eq!(props["orientable"], false);
    assert_eq!(props["two_connected"], true);
    let contracted = mmkit(&["minor", s(&file), "--contract", "b"]);
    assert_eq!(contracted.status.code(), Some(0));
    assert_eq!(json(&contracted)["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn output_is_stable() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "dex.json", D_EX);
    let a = mmkit(&["q3", s(&file)]).stdout;
    let b = mmkit(&["q3", s(&file)]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.find("\"bases\"").unwrap() < text.find("\"classes\"").unwrap());
}

#[test]
fn check_with_bounds_and_unknown_names() {
    let out = mmkit(&["check", "chain-even", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(mmkit(&["check", "chain-even", "--max-n", "5"]).status.code(), Some(2));
    assert_eq!(mmkit(&["check", "no-such-check"]).status.code(), Some(2));
}
