use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negacycl"))
        .args(args)
        .env("NEGACYCL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn x4_plus_1_is_two_paired_quadratics() {
    let doc = json(&["factor", "--p", "3", "--e", "1", "--n", "4", "--sign", "-1"]);
    assert_eq!(doc["s"], 0);
    assert_eq!(doc["t"], 1);
    let factors = doc["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    for f in factors {
        assert_eq!(f["poly"].as_str().unwrap().split(',').count(), 3);
        assert!(f["tag"].get("paired").is_some());
    }
}

#[test]
fn x_plus_1_is_self_paired() {
    let doc = json(&["factor", "--p", "3", "--n", "1", "--sign", "-1"]);
    assert_eq!(doc["factors"][0]["poly"], "1,1");
    assert_eq!(doc["factors"][0]["tag"], "self");
}

#[test]
fn hermitian_x7_plus_1_has_three_scrim_factors() {
    let doc = json(&["factor", "--p", "3", "--n", "7", "--sign", "-1", "--mode", "hermitian"]);
    assert_eq!(doc["s"], 3);
    assert_eq!(doc["r"], 3);
}

#[test]
fn count_shows_as_printed_value_in_verbose_mode() {
    let doc = json(&["count", "--p", "3", "--n", "2", "--sign", "-1", "--verbose"]);
    assert_eq!(doc["closed"], 1);
    assert_eq!(doc["recursive"], 1);
    assert_eq!(doc["oracle"], 1);
    assert_eq!(doc["as_printed"], 3);

    let text = run(&["count", "--p", "3", "--n", "2", "--sign", "-1", "--verbose"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("as-printed=3 (differs"));
}

#[test]
fn count_small_lengths() {
    assert_eq!(json(&["count", "--p", "3", "--n", "1", "--sign", "-1"])["closed"], 1);
    assert_eq!(json(&["count", "--p", "3", "--n", "14", "--sign", "-1"])["closed"], 3);
}

#[test]
fn codes_censuses() {
    let doc = json(&["codes", "--p", "3", "--e", "1", "--n", "7", "--mode", "euclidean"]);
    assert_eq!(doc["count"], 4);
    assert_eq!(doc["generators"].as_array().unwrap().len(), 4);
    assert_eq!(json(&["codes", "--p", "3", "--n", "4"])["count"], 2);

    let out = run(&["codes", "--p", "3", "--n", "3"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("count=2"));
    assert!(text.contains("exponents {0}"));
    assert!(text.contains("exponents {3}"));
}

#[test]
fn classify_verdicts() {
    assert_eq!(json(&["classify", "--p", "3", "--n", "7"])["verdict"], "all-self");
    assert_eq!(json(&["classify", "--p", "3", "--n", "5", "--mode", "hermitian"])["verdict"], "only-x+1");
}

#[test]
fn json_report_round_trips() {
    let out = run(&["factor", "--p", "5", "--e", "2", "--n", "12", "--sign", "-1", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = negacycl::factorization::ReportDoc::from_json(text.trim()).unwrap();
    let report = doc.clone().into_report().unwrap();
    assert_eq!(report.to_doc(), doc);
    assert_eq!(report.to_json(), text.trim());
}

#[test]
fn bad_flags_exit_with_2() {
    assert_eq!(run(&["factor", "--p", "4", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "--p", "3", "--n", "3", "--sign", "2"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "--p", "2", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--p", "3", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["codes", "--p", "5", "--n", "12", "--mode", "hermitian", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn reduced_selftest_passes() {
    let out = run(&["selftest", "--q-max", "9", "--n-max", "50"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[ok]")).count(), 8);
}
