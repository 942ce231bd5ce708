//! End-to-end tests of the command-line surface: golden fixtures, exit
//! codes, format switches, and round-tripping of emitted JSON.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_troptoda"))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON output")
}

#[test]
fn fay_golden_fixture() {
    let out = run(&["fay", "--input", &fixture("ex_counter_fay.json")]);
    let doc = stdout_json(&out);
    assert_eq!(doc["F"][0], "-9");
    assert_eq!(doc["F"][1], "-15/2");
    assert_eq!(doc["F"][2], "-17/2");
    assert_eq!(doc["status"], "sign-ambiguous");
    assert_eq!(doc["s"][0], "ambiguous");
}

#[test]
fn theta_value_fixture() {
    let out = run(&["theta", "--input", &fixture("theta_query.json")]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "-5");
    assert_eq!(doc["unique"], true);
    assert_eq!(doc["argmin"][0][0], 1);
}

#[test]
fn evolve_worked_orbit() {
    let out = run(&[
        "evolve",
        "--input",
        &fixture("worked_orbit_state.json"),
        "--steps",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // t=1 row of the worked orbit: Q=(0,1), W=(3,2)
    assert!(text.contains("1,1,0,3\n"), "{text}");
    assert!(text.contains("1,2,1,2\n"), "{text}");
    assert!(text.lines().next().unwrap().contains("invariants"));
}

#[test]
fn evolve_fixed_point_constant_rows() {
    let out = run(&[
        "evolve",
        "--input",
        r#"{"g":1,"Q":["0","0"],"W":["1","1"]}"#,
        "--steps",
        "3",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    for t in 0..=3 {
        assert!(text.contains(&format!("{t},1,0,1\n")), "{text}");
    }
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&["evolve", "--input", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("error object on stderr");
    assert_eq!(err["kind"], "Input");
}

#[test]
fn non_generic_curve_exits_3() {
    let out = run(&["curve", "--input", r#"{"g":1,"C":["4","2","0"]}"#]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn curve_json_round_trips() {
    let out = run(&["curve", "--input", &fixture("curve_g2.json")]);
    let doc = stdout_json(&out);
    assert_eq!(doc["L"], "11");
    assert_eq!(doc["K"][0][0], "18");
    assert_eq!(doc["K"][0][1], "-3");
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 7);
    assert_eq!(doc["graph"]["rays"].as_array().unwrap().len(), 4);
    // re-serialize: byte-identical run-to-run
    let again = run(&["curve", "--input", &fixture("curve_g2.json")]);
    assert_eq!(out.stdout, again.stdout, "deterministic output");
}

#[test]
fn solve_rows_verified() {
    let out = run(&[
        "solve",
        "--input",
        &fixture("solve_g1.json"),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() > 10);
    for line in text.lines().skip(1) {
        assert!(line.ends_with("true"), "unverified row: {line}");
    }
}

#[test]
fn discrete_summary_errors_decrease() {
    let out = run(&[
        "discrete",
        "--input",
        &fixture("discrete_g1.json"),
        "--format",
        "csv",
        "--output",
        "/dev/null",
    ]);
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("summary on stderr");
    let sup = summary["sup"].as_array().unwrap();
    assert_eq!(sup.len(), 3);
    let errs: Vec<f64> = sup.iter().map(|s| s["err_Q"].as_f64().unwrap()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn udlimit_within_tolerance_at_smallest_eps() {
    let out = run(&[
        "udlimit",
        "--input",
        &fixture("udlimit_g1.json"),
        "--format",
        "json",
    ]);
    let doc = stdout_json(&out);
    let rows = doc["rows"].as_array().unwrap();
    let b_errs: Vec<f64> = rows
        .iter()
        .filter(|r| r["quantity"] == "b[1,1]")
        .map(|r| r["abs_err"].as_f64().unwrap())
        .collect();
    assert_eq!(b_errs.len(), 3);
    assert!(b_errs[0] > b_errs[1] && b_errs[1] > b_errs[2]);
    assert!(b_errs[2] < 1.2, "within 10% of 12");
}

#[test]
fn stdin_input_works() {
    use std::io::Write as _;
    let mut child = bin()
        .args(["theta", "--input", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(br#"{"K":[["12"]],"Z":["12"]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["value"], "-6");
}
