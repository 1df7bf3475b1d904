use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brieskorn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn analyze(name: &str) -> (i32, Value) {
    let f = fixture(name);
    let out = run(&["analyze", f.to_str().unwrap()]);
    (out.status.code().unwrap(), json(&out))
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["analyze", "/nonexistent/job.json"]).status.code(),
        Some(1)
    );
    let f = fixture("golden.json");
    assert_eq!(
        run(&["analyze", f.to_str().unwrap(), "--format", "xml"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn non_commode_names_the_axis() {
    let (code, v) = analyze("not_commode.json");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "not_commode");
    assert!(v["error"]["message"].as_str().unwrap().contains("u2 axis"));
}

#[test]
fn boundary_deformation_is_rejected() {
    let (code, v) = analyze("not_subdiagram.json");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "not_subdiagram");
}

#[test]
fn exhausted_budget_exits_three() {
    let f = fixture("mirror_p2.json");
    let out = run(&["analyze", f.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "budget_exceeded");
}

#[test]
fn milnor_subcommand() {
    let f = fixture("golden.json");
    let out = run(&["milnor", f.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["mu"], 16);
    assert_eq!(v["newton_number"], 16);
}

#[test]
fn spectrum_subcommand() {
    let f = fixture("interval.json");
    let v = json(&run(&["spectrum", f.to_str().unwrap()]));
    assert_eq!(v["spectrum"], serde_json::json!(["0", "1"]));
    assert_eq!(v["symmetric"], true);
}

#[test]
fn divide_subcommand() {
    let f = fixture("cubic_unfolding.json");
    let out = run(&["divide", f.to_str().unwrap(), "--h", "u^2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["remainder"], "-1/3*x");
    assert_eq!(v["cofactors"], serde_json::json!(["1/3"]));
    assert_eq!(v["identity_holds"], true);
}

#[test]
fn text_format_is_not_json() {
    let f = fixture("interval.json");
    let out = run(&["spectrum", f.to_str().unwrap(), "--format", "text"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("spectrum: [0, 1]"), "{s}");
}

#[test]
fn gc_without_r0_flag() {
    let f = fixture("interval.json");
    let with = json(&run(&["check", f.to_str().unwrap()]));
    let without = json(&run(&["check", f.to_str().unwrap(), "--gc-no-r0"]));
    assert_eq!(with["conditions"]["gc"]["passes"], true);
    assert_eq!(without["conditions"]["gc"]["passes"], false);
}

#[test]
fn every_valid_fixture_analyzes() {
    for name in [
        "golden.json",
        "cubic.json",
        "cubic_unfolding.json",
        "interval.json",
        "mirror_p2.json",
        "quintic_gauge.json",
        "ec_tie.json",
    ] {
        let (code, v) = analyze(name);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["mu"], v["newton_number"], "{name}");
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let f = fixture("golden.json");
    let with = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_brieskorn"))
            .args(["analyze", f.to_str().unwrap()])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(with("1"), with("4"));
}
