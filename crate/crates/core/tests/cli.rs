use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_vhiggs");
const WORKED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/worked_instance.json");

fn worked() -> String {
    std::fs::read_to_string(WORKED).unwrap()
}

fn run_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

#[test]
fn check_worked_instance_passes() {
    let out = run(&["check", WORKED, "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert!(r["verdicts"].as_object().unwrap().values().all(|v| v == true));
    assert!(r.get("timing_ms").is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn check_doubled_theta_prime_fails_at_zero() {
    let doc = worked().replacen(r#""ThetaPrime": {"twist": 1, "entries": [["0", "1"], ["x", "0"]]}"#,
        r#""ThetaPrime": {"twist": 1, "entries": [["0", "2"], ["2*x", "0"]]}"#, 1);
    let out = run_with_input(&["check", "-", "--no-timing"], &doc);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdicts"]["fiber_condition"], false);
    assert_eq!(r["certificates"]["fiber_condition"][0]["x"], "0");
    assert_eq!(r["certificates"]["fiber_condition"][0]["ok"], false);
    assert_eq!(r["instance"]["ThetaPrime"]["entries"][1][0], "2*x");
}

#[test]
fn malformed_polynomial_is_an_input_error() {
    let doc = worked().replacen(r#"["x", "0"]]}}"#, r#"["t^^2", "0"]]}}"#, 1);
    let out = run_with_input(&["check", "-"], &doc);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["error"]["kind"], "input");
    assert_eq!(run(&["check", "/nonexistent/doc.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reconstruct_examples() {
    let out = run(&["reconstruct", WORKED, "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &report(&out)["certificates"]["certificate"];
    assert_eq!(cert, &serde_json::json!({"commutation": true, "fiber": [{"x": "0", "ok": true}], "unique": true}));

    let doubled = worked().replacen(r#""ThetaPrime": {"twist": 1, "entries": [["0", "1"], ["x", "0"]]}"#,
        r#""ThetaPrime": {"twist": 1, "entries": [["0", "2"], ["2*x", "0"]]}"#, 1);
    let out = run_with_input(&["reconstruct", "-"], &doubled);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "fiber_condition");

    let noncommuting = r#"{"hecke": {"S": 1, "L": 1, "points": []}, "E": {"twists": [0, 0]},
        "Theta": {"twist": 1, "entries": [["x", "0"], ["0", "0"]]},
        "ThetaPrime": {"twist": 1, "entries": [["0", "1"], ["0", "0"]]}}"#;
    let out = run_with_input(&["reconstruct", "-"], noncommuting);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["error"]["kind"], "commutation");
    assert!(r["certificates"]["commutator"].is_object());
}

#[test]
fn spectral_examples() {
    let out = run(&["spectral", WORKED, "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["certificates"]["chi"], "t^2 - x");
    assert_eq!(r["certificates"]["integrality"]["integral"], true);
    assert_eq!(r["certificates"]["psi"], "t");

    let diag = r#"{"hecke": {"S": 1, "L": 1, "points": []}, "E": {"twists": [0, 0]},
        "Theta": {"twist": 1, "entries": [["x", "0"], ["0", "0"]]},
        "ThetaPrime": {"twist": 1, "entries": [["x", "0"], ["0", "0"]]}}"#;
    let out = run_with_input(&["spectral", "-"], diag);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["certificates"]["integrality"]["factor"], "t - x");

    let zero = worked().replace(r#"[["0", "1"], ["x", "0"]]"#, r#"[["0", "0"], ["0", "0"]]"#);
    let out = run_with_input(&["spectral", "-"], &zero);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["certificates"]["chi"], "t^2");
    assert_eq!(r["certificates"]["integrality"]["reason"], "non_reduced");
}

#[test]
fn build_examples() {
    let dir = std::env::temp_dir().join(format!("vhiggs-build-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let output = dir.join("instance.json");
    let doc = r#"{"spectral": {"chi": "t^2 - x", "a": 1, "r": 2, "psi": "t", "b": 1},
        "hecke": {"S": 1, "L": 1, "points": [{"x": "0", "lambda": "1"}]}}"#;
    let out = run_with_input(&["build", "-", "--output", output.to_str().unwrap()], doc);
    assert_eq!(out.status.code(), Some(0));
    let inst = &report(&out)["instance"];
    assert_eq!(inst["E"]["twists"], serde_json::json!([0, -1]));
    assert_eq!(inst["Theta"]["entries"], serde_json::json!([["0", "x"], ["1", "0"]]));
    assert_eq!(inst["ThetaPrime"], inst["Theta"]);
    // the written document checks clean
    assert_eq!(run(&["check", output.to_str().unwrap()]).status.code(), Some(0));

    let doc = r#"{"spectral": {"chi": "t^2 - x", "a": 1, "r": 2, "psi": "2*x*t", "b": 2},
        "hecke": {"S": 1, "L": 2, "points": [{"x": "1", "lambda": "2"}]}}"#;
    let out = run_with_input(&["build", "-"], doc);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["instance"]["ThetaPrime"]["entries"], serde_json::json!([["0", "2*x^2"], ["2*x", "0"]]));

    let doc = r#"{"spectral": {"chi": "t^2 - x", "a": 1, "r": 2, "psi": "t", "b": 1},
        "hecke": {"S": 1, "L": 1, "points": [{"x": "1", "lambda": "3"}]}}"#;
    let out = run_with_input(&["build", "-"], doc);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["error"]["kind"], "eigenvalue_condition");
    assert!(r["instance"]["spectral"].is_object());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn hecke_make_examples() {
    for (c, d, l) in [("0", "0", "2"), ("1", "-1", "2")] {
        let out = run(&["hecke-make", "--c", c, "--d", d, "--l", l, "--pool", "0,1", "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["certificates"]["hecke"]["S"], 1);
        assert_eq!(r["certificates"]["hecke"]["L"], 1);
        assert_eq!(r["seed"], 3);
    }
    let out = run(&["hecke-make", "--c", "1", "--d", "-1", "--l", "2", "--pool", "0,1"]);
    let pts = &report(&out)["certificates"]["hecke"]["points"];
    assert_eq!(pts[0]["lambda"], pts[1]["lambda"]);

    let out = run(&["hecke-make", "--c", "3", "--d", "0", "--l", "1", "--pool", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["instance"]["c"], 3);
    assert_eq!(run(&["hecke-make", "--c", "0", "--d", "0", "--l", "1", "--pool", "0,zz"]).status.code(), Some(2));
}

#[test]
fn selftest_examples() {
    let out = run(&["selftest", "--seed", "1", "--count", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = run(&["selftest", "--count", "0", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["verdicts"].as_object().unwrap().is_empty());

    let out = run(&["selftest", "--seed", "1", "--count", "10", "--sign", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(r["error"]["message"].as_str().unwrap().contains("eigenvalue"));
    assert!(r["instance"].is_object());
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["check", WORKED, "--no-timing", "--seed", "9"][..],
        &["spectral", WORKED, "--no-timing"][..],
        &["selftest", "--count", "5", "--seed", "2", "--no-timing"][..],
        &["hecke-make", "--c", "2", "--d", "0", "--l", "3", "--pool", "0,1,2,3", "--seed", "4", "--no-timing"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}
