use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PLANE: &str = r#"{"dim":2,"lattice":{"generators":[]},"boundary":["0","0"]}"#;
const HALF: &str = r#"{"dim":2,"lattice":{"generators":[["1/2","1/2"]]},"boundary":["0","0"]}"#;
const QUARTER: &str = r#"{"dim":3,"lattice":{"generators":[["1/4","1/2","3/4"]]},"boundary":["0","0","1"]}"#;

fn toricmld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricmld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn germ_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mld_point_face_and_oracle() {
    let dir = TempDir::new().unwrap();
    let half = germ_file(&dir, "half.json", HALF);
    let out = toricmld(&["mld", "-i", s(&half)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1");

    let out = toricmld(&["mld", "-i", s(&half), "--face", "1", "--oracle-radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "1");
    assert_eq!(v["oracle"]["agrees"], true);

    let out = toricmld(&["mld", "-i", s(&half), "--global"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn lct_variants() {
    let dir = TempDir::new().unwrap();
    let plane = germ_file(&dir, "plane.json", PLANE);
    let out = toricmld(&["lct", "-i", s(&plane), "--exponents", "2,0;0,3"]);
    assert_eq!(json(&out)["lct"], "5/6");
    let out = toricmld(&["lct", "-i", s(&plane), "--fermat", "2,3"]);
    let v = json(&out);
    assert_eq!(v["lct"], "5/6");
    assert_eq!(v["newton"]["lct"], "5/6");
    let out = toricmld(&["lct", "-i", s(&plane), "--monomial", "1,2"]);
    assert_eq!(json(&out)["lct"], "1/2");
    let out = toricmld(&["lct", "-i", s(&plane), "--general-member"]);
    assert_eq!(json(&out)["lct"], "1");
    // exactly one polynomial is required
    assert_eq!(toricmld(&["lct", "-i", s(&plane)]).status.code(), Some(1));
}

#[test]
fn adjoin_with_check() {
    let dir = TempDir::new().unwrap();
    let g = germ_file(&dir, "q.json", QUARTER);
    let out = toricmld(&["adjoin", "-i", s(&g), "--divisor", "3", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pia"]["passed"], true);
    assert_eq!(v["scales"], serde_json::json!([2, 1]));
    // adjunction needs coefficient 1 on the divisor
    let out = toricmld(&["adjoin", "-i", s(&g), "--divisor", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flat_trace_and_step_bound() {
    let dir = TempDir::new().unwrap();
    let plane = germ_file(&dir, "plane.json", PLANE);
    let out = toricmld(&["flat", "-i", s(&plane)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gammas"], serde_json::json!(["1", "1"]));
    assert_eq!(v["final_value"], "0");
    let out = toricmld(&["flat", "-i", s(&plane), "--max-steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn survey_writes_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = toricmld(&[
        "survey",
        "--dim",
        "2",
        "--max-index",
        "3",
        "--boundary-set",
        "0",
        "--out",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"], 4);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("id,dim,index,boundary,mld,"));
    assert_eq!(lines.len(), 5);
    assert!(!text.contains('\r'));

    let js = dir.path().join("rows.json");
    let out = toricmld(&[
        "survey",
        "--dim",
        "1",
        "--max-index",
        "1",
        "--boundary-set",
        "0,1/2,1",
        "--out",
        s(&js),
        "--json",
        "--jobs",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&fs::read_to_string(&js).unwrap()).unwrap();
    let mlds: Vec<&str> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["mld"].as_str().unwrap())
        .collect();
    assert_eq!(mlds, ["1", "1/2", "0"]);
}

#[test]
fn check_small_corpus() {
    let dir = TempDir::new().unwrap();
    let cfg = germ_file(
        &dir,
        "cfg.json",
        r#"{"dims":[2],"max_index":4,"boundary_set":["0","1"],"oracle_radius":2}"#,
    );
    let out = toricmld(&["check", "--corpus-config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["germs_checked"].as_u64().unwrap() > 0);

    let empty = germ_file(&dir, "empty.json", r#"{"dims":[]}"#);
    let out = toricmld(&["check", "--corpus-config", s(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty corpus"));
}

#[test]
fn invalid_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let bad = germ_file(
        &dir,
        "bad.json",
        r#"{"dim":2,"lattice":{"generators":[]},"boundary":["0","3/2"]}"#,
    );
    assert_eq!(toricmld(&["mld", "-i", s(&bad)]).status.code(), Some(1));
    let junk = germ_file(&dir, "junk.json", "not json");
    assert_eq!(toricmld(&["mld", "-i", s(&junk)]).status.code(), Some(1));
    assert_eq!(toricmld(&["mld", "-i", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(toricmld(&["frobnicate"]).status.code(), Some(1));
    let cfg = germ_file(&dir, "cfg.json", r#"{"unknown":1}"#);
    assert_eq!(toricmld(&["check", "--corpus-config", s(&cfg)]).status.code(), Some(1));
    assert_eq!(toricmld(&["--help"]).status.code(), Some(0));
}
