use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elemgroups")).args(args).output().expect("binary runs")
}

const FREE: &str = r#"{"kind":"free","gens":["r","s"]}"#;
const SP3: &str = r#"{"base":{"kind":"modular","m":3},"epsilon":-1,"lambda":"maximal"}"#;

#[test]
fn verify_all_over_free_ring_passes() {
    let out = run(&["verify", "all", "--ring", FREE, "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: pass"));
}

#[test]
fn empty_suite_list_exits_zero() {
    let out = run(&["verify", "--ring", FREE]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ucom_over_symplectic_z3() {
    let out = run(&["verify", "ucom", "--form", SP3, "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn config_errors_exit_two() {
    let out = run(&["verify", "ecom", "--ring", r#"{"kind":"modular","m":1}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "ecom", "--ring", r#"{"kind":"modular""#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    let out = run(&["verify", "ucom", "--ring", FREE]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "nonsense", "--ring", FREE]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let out = run(&["closure", "--ring", r#"{"kind":"modular","m":3}"#, "--n", "3", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn specs_from_files_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("form.json");
    std::fs::write(&spec, SP3).unwrap();
    let report = dir.path().join("out.json");
    let form_arg = format!("@{}", spec.display());
    let out = run(&["lambda-sr", "--form", &form_arg, "--json", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["checks"][0]["id"], "lambda-sr.m1");
    assert_eq!(json["checks"][0]["status"], "pass");
    assert!(json["checks"][0]["citation"].as_str().is_some_and(|c| !c.is_empty()));
    assert_eq!(json["context"]["form"]["base"]["m"], 3);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "all", "--ring", r#"{"kind":"integers"}"#, "--n", "3", "--seed", "5", "--json", "-"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["sr", "--ring", r#"{"kind":"modular","m":4}"#, "--json", "-", "--timings"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("wall_ms"));
}

#[test]
fn oracle_verbs() {
    let z2 = r#"{"kind":"modular","m":2}"#;
    for args in [
        vec!["closure", "--ring", z2, "--n", "3", "--group", "gl"],
        vec!["normal-closure", "--ring", r#"{"kind":"modular","m":3}"#, "--n", "3"],
        vec!["perfect", "--ring", z2, "--n", "3"],
        vec!["sr", "--ring", r#"{"kind":"modular","m":6}"#],
        vec!["k1", "--ring", r#"{"kind":"modular","m":3}"#, "--n", "2"],
        vec!["ku1", "--form", r#"{"base":{"kind":"modular","m":2},"lambda":"maximal"}"#, "--n", "1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}\n{}", String::from_utf8_lossy(&out.stdout));
    }
}
