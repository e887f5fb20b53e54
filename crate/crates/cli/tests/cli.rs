use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn structures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../structures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhglab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn path(name: &str) -> String {
    structures().join(name).to_string_lossy().into_owned()
}

#[test]
fn growth_by_builtin_name() {
    let out = run(&["growth", "free2", "--n", "10"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["rows"][10]["count"], 2 * 3u64.pow(10) - 1);
    assert!(v["report"]["rows"][0]["log_count_over_n"].is_null());
    assert_eq!(v["structure_sha256"].as_str().unwrap().len(), 64);
    assert!(v["ledger"]["M"].is_string());
}

#[test]
fn growth_csv() {
    let out = run(&[
        "growth",
        "--structure",
        &path("z2.json"),
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,count,log_count_over_n");
    assert_eq!(lines[1], "0,1,");
    assert!(lines[4].starts_with("3,25,"));
}

#[test]
fn distance_fit_from_file() {
    let out = run(&["distance", &path("f2xZ.json"), "--s", "0", "--pairs", "50"]);
    assert!(out.status.success());
    assert!(json(&out)["report"]["fit"]["k"].as_f64().unwrap() <= 1.5);
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&["check", &path("f2xZ.json")]).status.code(), Some(0));
    let out = run(&["check", &path("f2xZ-corrupt-rho.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["passed"], false);
    assert_eq!(
        run(&["check", "/nonexistent/structure.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(run(&["check", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn decompose_product() {
    let out = run(&["decompose", "f2xf2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["report"]["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_with_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cert.json");
    let out = run(&[
        "certify",
        "free2",
        "--genset",
        "a,b",
        "--depth",
        "7",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("FreeSubgroup"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["command"], "certify");
    assert_eq!(v["report"]["certificate"]["variant"], "free-subgroup");
    assert_eq!(v["report"]["certificate"]["verified_depth"], 7);
}

#[test]
fn certify_rejects_bad_words() {
    assert_eq!(
        run(&["certify", "free2", "--genset", "a,q"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["certify", "free2", "--depth", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn scan_csv_quotes_encodings_and_ends_with_summary() {
    let out = run(&[
        "scan",
        "free2",
        "--scan-size",
        "2",
        "--scan-length",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "generating_set");
    assert_eq!(&headers[4], "lambda0_bound");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.len() >= 2);
    assert_eq!(&rows.last().unwrap()[0], "summary");
    assert!(rows[..rows.len() - 1]
        .iter()
        .all(|r| r[0].starts_with('{') && &r[1] == "FreeSubgroup"));
}

#[test]
fn empty_scan_is_header_only() {
    let out = run(&[
        "scan",
        "f2xZ",
        "--scan-size",
        "0",
        "--scan-length",
        "0",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn reports_are_reproducible() {
    let a = run(&["scan", "free2", "--scan-length", "1"]);
    let b = run(&["scan", "free2", "--scan-length", "1"]);
    assert_eq!(a.stdout, b.stdout);
}
