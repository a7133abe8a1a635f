use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn spbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spbw")).args(args).env_remove("SPBW_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn normalize_reduces_to_normal_form() {
    let o = spbw(&["normalize", "--algebra", &data("dqh.json"), "--expr", "x*y"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2*y*x + 1\n");
    let o = spbw(&["normalize", "--fixture", "FIX2", "--expr", "(1 + 2*x)*2"]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn zoo_output_loads_back() {
    let path = std::env::temp_dir().join(format!("spbw-an-{}.json", std::process::id()));
    let o = spbw(&["zoo", "build", "An", "--param", "q1=5"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let o = spbw(&["normalize", "--algebra", path.to_str().unwrap(), "--expr", "x1*t1"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(stdout(&o), "5*t1*x1 + 1\n");
    assert_eq!(spbw(&["zoo", "build", "An", "--param", "z=1"]).status.code(), Some(2));
}

#[test]
fn udim_reports_value_and_witness() {
    let o = spbw(&["--format", "json", "udim", "--module", &data("product_ring.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    assert_eq!(v["provenance"], "by-exhaustion");

    let o = spbw(&["--format", "json", "udim", "--fixture", "FIX1", "--module", &data("product_ring.json")]);
    let v = json(&o);
    assert_eq!(v["induced"]["value"], 2);
    assert!(v["induced"]["provenance"].as_str().unwrap().starts_with("by-theorem("));
}

#[test]
fn good_check_reports_the_witness() {
    let o = spbw(&["--format", "json", "good-check", "--fixture", "FIX2", "--element", "1 + 2*x"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["good"], false);
    assert_eq!(v["witness"], "2");
    let o = spbw(&["make-good", "--fixture", "FIX2", "--element", "1 + 2*x"]);
    assert!(stdout(&o).starts_with("2 = (2*x + 1)·2"));
}

#[test]
fn exit_codes() {
    assert_eq!(spbw(&["udim", "--algebra", &data("dual_numbers.json")]).status.code(), Some(1));
    assert_eq!(spbw(&["verify", "--algebra", &data("dual_numbers.json")]).status.code(), Some(1));
    assert_eq!(spbw(&["validate", "--algebra", &data("unknown_key.json")]).status.code(), Some(2));
    assert_eq!(spbw(&["validate", "--fixture", "FIX9"]).status.code(), Some(2));
    assert_eq!(spbw(&["verify", "--fixture", "FIX1", "--degree", "0"]).status.code(), Some(2));
    assert_eq!(spbw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(spbw(&["good-check", "--fixture", "FIX3", "--element", "x"]).status.code(), Some(2));
    assert_eq!(spbw(&["validate", "--fixture", "FIX4"]).status.code(), Some(0));
}

#[test]
fn seed_and_jobs() {
    let seeded = Command::new(env!("CARGO_BIN_EXE_spbw"))
        .args(["verify", "--fixture", "FIX3"])
        .env("SPBW_SEED", "5")
        .output()
        .unwrap();
    assert!(stdout(&seeded).contains("seed 5"));
    let bad = Command::new(env!("CARGO_BIN_EXE_spbw")).args(["verify", "--fixture", "FIX3"]).env("SPBW_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let one = spbw(&["--jobs", "1", "verify", "--fixture", "FIX1"]);
    assert_eq!(one.stdout, spbw(&["verify", "--fixture", "FIX1"]).stdout);
}

#[test]
fn verify_json_lists_every_check() {
    let o = spbw(&["--format", "json", "verify", "--fixture", "FIX2", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let checks = v[0]["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["provenance"].is_string()));
}
