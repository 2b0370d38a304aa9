use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypernorm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_input(args: &[&str], input: &[u8]) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn first_value(out: &Output) -> String {
    stdout(out).lines().next().unwrap().split_whitespace().last().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn star_pipe_prints_two() {
    let star = run(&["gen", "star", "--n", "4"]);
    assert!(star.status.success());
    let norm = run_with_input(&["norm", "--p", "2"], &star.stdout);
    assert_eq!(norm.status.code(), Some(0));
    assert_eq!(first_value(&norm), "2.0");
}

#[test]
fn graph_input_is_accepted() {
    let star = run(&["gen", "star", "--n", "9", "--as-graph"]);
    let norm = run_with_input(&["norm", "-", "--p", "2"], &star.stdout);
    assert_eq!(first_value(&norm), "3.0");
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["norm", "missing.json", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"format":"rtensor-v1","order":2,"dims":[2],"entries":[]}"#).unwrap();
    assert_eq!(run(&["norm", path.to_str().unwrap(), "--p", "2"]).status.code(), Some(2));
    let ones = run(&["gen", "all-ones", "--r", "2", "--n", "2"]);
    assert_eq!(run_with_input(&["norm", "--p", "0.5"], &ones.stdout).status.code(), Some(2));
    assert_eq!(run_with_input(&["norm", "--p", "2", "--starts", "0"], &ones.stdout).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["norm"]).status.code(), Some(2));
}

#[test]
fn json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let gen =
        run(&["gen", "random", "--r", "3", "--n", "6", "--seed", "3", "--weighted", "-o", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let args = ["norm", path.to_str().unwrap(), "--p", "3", "--seed", "5", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for key in ["value", "p", "converged", "starts", "iterations", "witness"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["witness"]["kit"]["vectors"].as_array().unwrap().len(), 3);
}

#[test]
fn symmetrant_then_eta() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("a.json");
    let sym = dir.path().join("s.json");
    std::fs::write(
        &src,
        r#"{"format":"rtensor-v1","order":2,"dims":[1,2],"entries":[{"idx":[0,0],"val":1},{"idx":[0,1],"val":1}]}"#,
    )
    .unwrap();
    assert!(run(&["symmetrant", src.to_str().unwrap(), "-o", sym.to_str().unwrap()]).status.success());
    assert!(Path::new(&sym).exists());
    let eta = json(&run(&["eta", sym.to_str().unwrap(), "--p", "2", "--json"]));
    assert!((eta["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn graph_commands() {
    let beta = run(&["gen", "beta-star", "--k", "8", "--as-graph"]);
    let bounds = json(&run_with_input(&["graph", "bounds", "--p", "3", "--with-estimate", "--json"], &beta.stdout));
    assert!((bounds["degree_product"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!(bounds["tensor"]["violations"].as_array().unwrap().is_empty());
    let tensor = run_with_input(&["graph", "tensor"], &beta.stdout);
    let rho = json(&run_with_input(&["rho", "--json"], &tensor.stdout));
    assert!((rho["value"].as_f64().unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn bounds_table() {
    let ones = run(&["gen", "all-ones", "--r", "3", "--n", "2"]);
    let out = stdout(&run_with_input(&["bounds", "--p", "3"], &ones.stdout));
    assert!(out.lines().any(|l| l.starts_with("lower") && l.contains("regular_value") && l.ends_with(" 4.0")));
    assert!(out.lines().any(|l| l.starts_with("upper") && l.contains("hlp")));
}

#[test]
fn verify_mth1_passes() {
    let out = run(&["verify", "--suite", "mth1", "--trials", "25", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_csv_log() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.csv");
    let out = run(&["verify", "--suite", "gradient", "--trials", "4", "--csv", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next(), Some("trial,seed,quantity,lhs,rhs,gap,pass"));
    assert_eq!(csv.lines().count(), 1 + 8);
}
