use std::path::PathBuf;
use std::process::{Command, Output};

fn sesqui(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sesqui")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(args: &[&str], out: &PathBuf) {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = sesqui(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn f541_example_prints_both_tables() {
    let o = sesqui(&["verify-example", "--name", "f541"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("  0 4 1 1 4\n  0 2 2 0 1\n  0 0 3 4 3\n  0 3 4 3 0\n  0 1 0 2 2"));
    assert!(text.contains("  0 2 3 3 2\n  0 1 1 0 3\n  0 0 4 2 4\n  0 4 2 4 0\n  0 3 0 1 1"));
}

#[test]
fn f101_and_wouter_examples_pass() {
    assert_eq!(sesqui(&["verify-example", "--name", "f101"]).status.code(), Some(0));
    let report = scratch("wouter_report.json");
    let o = sesqui(&["verify-example", "--name", "wouter", "--r", "3", "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(j["data"]["p"], 107);
    assert_eq!(j["data"]["tprime_order"], 27);
}

#[test]
fn identity_instance_passes() {
    let path = scratch("identity.json");
    gen(&["--family", "f541", "--degree", "1", "--variant", "norm", "--seed", "0"], &path);
    let o = sesqui(&["attack", "--in", path.to_str().unwrap(), "--reveal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "PASS"));
}

#[test]
fn ramified_end_to_end() {
    let path = scratch("wouter.json");
    gen(&["--family", "wouter", "--r", "3", "--degree", "5", "--variant", "ramified", "--seed", "7"], &path);
    let o = sesqui(&["attack", "--in", path.to_str().unwrap(), "--reveal"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn generation_is_byte_identical() {
    let (a, b) = (scratch("det_a.json"), scratch("det_b.json"));
    let args = ["--family", "gaussian(541)", "--degree", "3", "--variant", "sidh1", "--seed", "11"];
    gen(&args, &a);
    gen(&args, &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn tampered_truth_reports_fail() {
    let path = scratch("tampered.json");
    gen(&["--family", "gaussian(541)", "--degree", "2", "--variant", "sidh1", "--seed", "1"], &path);
    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut j["sealed"]["matrix"][0][0];
    let v: i64 = entry.as_str().unwrap().parse().unwrap();
    *entry = serde_json::Value::String(((v + 1) % 5).to_string());
    std::fs::write(&path, serde_json::to_string(&j).unwrap()).unwrap();
    let o = sesqui(&["attack", "--in", path.to_str().unwrap(), "--reveal"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn malformed_and_budget_exit_codes() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{}").unwrap();
    let o = sesqui(&["attack", "--in", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("MALFORMED:"));

    let path = scratch("budget.json");
    gen(&["--family", "gaussian(541)", "--degree", "2", "--variant", "norm", "--seed", "1"], &path);
    let o = Command::new(env!("CARGO_BIN_EXE_sesqui")).args(["attack", "--in", path.to_str().unwrap()]).env("SESQUI_BUDGET", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("BUDGET_EXCEEDED:"));
}

#[test]
fn pair_prints_logs() {
    let path = scratch("pair.json");
    gen(&["--family", "f541", "--degree", "2", "--variant", "norm", "--seed", "0"], &path);
    let o = sesqui(&["pair", "--in", path.to_str().unwrap(), "--op", "sesqui", "--P", "1,1", "--Q", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    // row a = 1, column b = 1 of the self-pairing tables
    assert!(stdout(&o).contains("in μ_5: 2 1"), "{}", stdout(&o));
    let o = sesqui(&["pair", "--in", path.to_str().unwrap(), "--op", "tate", "--P", "1,0", "--Q", "x"]);
    assert_eq!(o.status.code(), Some(3));
}
