use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn henkin(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_henkin-verify"));
    cmd.args(args).env_remove("HENKIN_OUTPUT_DIR");
    if let Some(dir) = out_dir {
        cmd.env("HENKIN_OUTPUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn d4_henkin_check_passes() {
    let out = henkin(&["henkin-check", "--dim", "4", "--maxdeg", "24"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json_stdout(&out);
    assert_eq!(r["schema_version"], "1.0.0");
    assert_eq!(r["op"], "henkin-check");
    assert_eq!(r["variant"], "D4");
    assert_eq!(r["pass"], true);
    let names: Vec<&str> = r["results"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(r["results"][1]["details"]["exact"], true);
}

#[test]
fn single_moment_reports_rational_closed_form() {
    let out = henkin(&["moments", "--dim", "4", "--alpha", "1,1,1,1"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json_stdout(&out);
    assert_eq!(r["results"][0]["details"]["closed_form"], "1/16");
    assert_eq!(r["params"]["samples"], 100_000);
    assert_eq!(r["seed"], 0);
}

#[test]
fn cantor_fourier_csv_table() {
    let out = henkin(&["cantor-fourier", "--max-n", "256", "--eps", "1e-10", "--format", "csv"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,re,im,abs"));
    assert_eq!(lines.count(), 513);
}

#[test]
fn invalid_configuration_exits_2() {
    assert_eq!(henkin(&["moments", "--dim", "3"], None).status.code(), Some(2));
    assert_eq!(henkin(&["cantor-fourier", "--eps", "-1"], None).status.code(), Some(2));
    assert_eq!(henkin(&["verify-norms", "--format", "csv"], None).status.code(), Some(2));
    assert_eq!(henkin(&["no-such-command"], None).status.code(), Some(2));
}

#[test]
fn failed_check_exits_1_and_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    // a tolerance far below the level-14 atom error
    let out = henkin(&["cantor-fourier", "--tol", "1e-15"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(dir.path().join("cantor-fourier.json")).unwrap();
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["pass"], false);
    assert_eq!(r["params"]["tol"], 1e-15);
}

#[test]
fn output_directory_override_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = henkin(&["verify-isometry", "--dim", "2", "--seed", "9", "--output", name], Some(dir.path()));
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn peak_check_reports_every_subcheck() {
    let out = henkin(&["peak-check"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json_stdout(&out);
    assert_eq!(r["results"].as_array().unwrap().len(), 5);
    assert_eq!(henkin(&["peak-check", "--dim", "2"], None).status.code(), Some(2));
}
