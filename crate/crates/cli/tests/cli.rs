use std::process::{Command, Output};

use serde_json::Value;

fn tambara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tambara"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_prints_the_norm() {
    let out = tambara(&["eval", "--p", "2", "--r", "2", "jnd(2, X[0,0])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn eval_json_has_f_coordinates() {
    let out = tambara(&["eval", "--p", "2", "--r", "2", "--format", "json", "X[1,0]*X[1,0] + 3"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["level"], 1);
    assert_eq!(v["coeffs"], serde_json::json!(["2", "3"]));
    assert_eq!(v["f_coords"]["m_top"], "7");
}

#[test]
fn syntax_error_exits_2() {
    let out = tambara(&["eval", "X[1,0] +"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 8"));
}

#[test]
fn spec_json_lists_five_points() {
    let out = tambara(&["spec", "--p", "2", "--r", "1", "--qs", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    assert_eq!(v["dimension"], 2);
}

#[test]
fn spec_dot_output() {
    let out = tambara(&["spec", "--p", "3", "--r", "2", "--qs", "2", "--format", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph spectrum {"));
    assert!(text.contains("->"));
}

#[test]
fn bad_prime_exits_2() {
    let out = tambara(&["spec", "--qs", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tambara(&["spec", "--p", "6", "--qs", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ideal_reports_witness() {
    let out = tambara(&[
        "ideal", "--p", "2", "--r", "2", "--base", "2", "--ops", "LS", "--falsify", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tambara"], "certified");
    assert_eq!(v["primality"]["status"], "witness");
}

#[test]
fn ideal_from_j_descriptor() {
    let out = tambara(&["ideal", "--p", "2", "--r", "2", "--j", "1,0,3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("J[1,0](3)"));
    let out = tambara(&["ideal", "--j", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let out = tambara(&["verify", "--p", "2", "--r", "1", "--qs", "3", "--cases", "50"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS picture"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn oracle_check_json() {
    let out = tambara(&["oracle-check", "--p", "3", "--r", "1", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_passed"], true);
}
