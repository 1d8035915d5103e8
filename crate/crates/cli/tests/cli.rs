use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn palinruler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palinruler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn gen_ruler_ends_with_eighth_term() {
    let out = palinruler(&["gen", "ruler", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,value\n"));
    assert_eq!(text.lines().last(), Some("8,3"));
}

#[test]
fn gen_pl_b_row_17() {
    let out = palinruler(&["gen", "pl-b", "17"]);
    assert!(stdout(&out).lines().any(|l| l == "17,2"));
}

#[test]
fn gen_run_count_single_row() {
    let out = palinruler(&["gen", "run-count", "1"]);
    assert_eq!(stdout(&out), "n,value\n1,1\n");
}

#[test]
fn gen_json_carries_schema_version() {
    let out = palinruler(&["gen", "period-doubling", "4", "--format", "json"]);
    let v = report(&out);
    assert_eq!(v["schema_version"], "v1");
    let values: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_u64().unwrap())
        .collect();
    assert_eq!(values, [0, 1, 0, 0]);
}

#[test]
fn unknown_sequence_is_a_usage_error() {
    let out = palinruler(&["gen", "fibonacci", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_unknown_suite_is_a_usage_error() {
    assert_eq!(palinruler(&["verify", "nope", "10"]).status.code(), Some(2));
}

#[test]
fn verify_out_of_range_bound_is_a_usage_error() {
    assert_eq!(
        palinruler(&["verify", "lemma1", "40"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_suites_pass() {
    for (suite, n) in [
        ("theorem1", "4096"),
        ("theorem2-bounds", "4096"),
        ("lemma3-oracle", "256"),
        ("prop2-oracle", "1024"),
        ("prop6", "4096"),
        ("lemma1", "12"),
        ("prop1", "12"),
        ("mixed-min", "1024"),
    ] {
        let out = palinruler(&["verify", suite, n]);
        let v = report(&out);
        assert_eq!(out.status.code(), Some(0), "{suite}: {v}");
        assert_eq!(v["status"], "pass");
        assert_eq!(v["command"], "verify");
        assert_eq!(v["result"]["violation_count"], 0);
    }
}

#[test]
fn verify_output_independent_of_worker_count() {
    let one = palinruler(&["--jobs", "1", "verify", "mixed-min", "512"]);
    let four = palinruler(&["--jobs", "4", "verify", "mixed-min", "512"]);
    assert_eq!(without_timing(report(&one)), without_timing(report(&four)));
}

#[test]
fn reports_are_deterministic() {
    let a = palinruler(&["masks", "1000"]);
    let b = palinruler(&["masks", "1000"]);
    assert_eq!(without_timing(report(&a)), without_timing(report(&b)));
}

#[test]
fn masks_for_17() {
    let v = report(&palinruler(&["masks", "17"]));
    assert_eq!(v["result"]["word"], "10001");
    assert_eq!(v["result"]["type_a"]["count"], 3);
    assert_eq!(v["result"]["pl_b"], 2);
    assert_eq!(v["result"]["mixed"]["replay_ok"], true);
    let masks: Vec<&str> = v["result"]["palindromic_suffixes_b"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["mask"].as_str().unwrap())
        .collect();
    assert!(masks.contains(&"B_5(1,4)"));
}

#[test]
fn masks_rejects_bad_word() {
    assert_eq!(
        palinruler(&["masks", "--word", "10a1"]).status.code(),
        Some(2)
    );
}

#[test]
fn factors_csv_lists_known_palindromes() {
    let text = stdout(&palinruler(&["factors", "b", "6"]));
    assert!(text.starts_with("i,j,form,o,v1,v2,x\n"));
    assert!(text.lines().any(|l| l.starts_with("3,4,b-left,")));
    assert!(text.lines().any(|l| l.starts_with("1,3,a-center,")));
}

fn members(v: &Value) -> Vec<u64> {
    v["result"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn levelset_examples() {
    let v = report(&palinruler(&["levelset", "run-count", "1", "15"]));
    assert_eq!(members(&v), [1, 3, 7, 15]);
    assert_eq!(v["result"]["constructed_dfa"]["mismatch_count"], 0);

    let v = report(&palinruler(&["levelset", "run-count", "4", "1001"]));
    assert!(members(&v).contains(&1000));

    let v = report(&palinruler(&["levelset", "pl-b", "2", "17"]));
    assert!(members(&v).contains(&17));
}

#[test]
fn levelset_learns_run_count_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m2.dfa");
    let out = palinruler(&[
        "levelset",
        "run-count",
        "2",
        "4096",
        "--learn",
        "16",
        "--emit-dfa",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["result"]["learned"]["isomorphic_to_constructed"], true);

    let check = palinruler(&[
        "levelset",
        "run-count",
        "2",
        "4096",
        "--dfa",
        path.to_str().unwrap(),
    ]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(report(&check)["result"]["dfa_check"]["mismatch_count"], 0);
}

#[test]
fn levelset_learner_failure_exits_1() {
    let out = palinruler(&["levelset", "run-count", "5", "4096", "--learn", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["learned"]["outcome"], "failed");
}

#[test]
fn levelset_wrong_dfa_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dfa");
    // Accepts every word.
    std::fs::write(&path, "states 1 initial 0\n0 0 0\n0 1 0\naccepting 0\n").unwrap();
    let out = palinruler(&[
        "levelset",
        "run-count",
        "2",
        "64",
        "--dfa",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oeis_check_bundled_files() {
    for (file, seq, offset) in [
        ("b007814.txt", "ruler", "0"),
        ("b096268.txt", "period-doubling", "1"),
        ("b005811.txt", "run-count", "0"),
    ] {
        let out = palinruler(&["oeis-check", &data(file), "--seq", seq, "--offset", offset]);
        let v = report(&out);
        assert_eq!(out.status.code(), Some(0), "{file}: {v}");
        assert_eq!(v["result"]["mismatch_count"], 0);
        assert!(v["result"]["compared"].as_u64().unwrap() >= 10_000);
    }
}

#[test]
fn oeis_check_wrong_offset_fails() {
    let out = palinruler(&[
        "oeis-check",
        &data("b007814.txt"),
        "--seq",
        "ruler",
        "--offset",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["result"]["mismatch_count"].as_u64().unwrap() > 0);
}

#[test]
fn oeis_check_truncated_file_uses_overlap() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "# a few terms\n1 0\n2 1\n3 0\n4 2\n").unwrap();
    let out = palinruler(&["oeis-check", f.path().to_str().unwrap(), "--seq", "ruler"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["compared"], 4);
}

#[test]
fn oeis_check_parse_error_exits_2_with_line() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "1 0\n2 x\n").unwrap();
    let out = palinruler(&["oeis-check", f.path().to_str().unwrap(), "--seq", "ruler"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_bfile_exits_2() {
    let out = palinruler(&["oeis-check", "/nonexistent/b.txt", "--seq", "ruler"]);
    assert_eq!(out.status.code(), Some(2));
}
