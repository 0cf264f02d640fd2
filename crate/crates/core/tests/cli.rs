use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-tangency")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_reports_bounds() {
    let out = run(&["analyze", "--expr", "x + y - 2", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["curve"]["delta"], "1");
    assert_eq!(v["bounds"]["bezout_degree"], "1");
}

#[test]
fn translate_exits_3() {
    let out = run(&["scan", "--expr", "x^2*y^3 - 5", "--max-slope", "3", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["exit_code"], 3);
    let out = run(&["analyze", "--expr", "x^2*y^3 - 5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(run(&["analyze", "--expr", "x + * y"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--expr", "x + y - 2", "--max-slope", "2", "--torsion", "0"]).status.code(), Some(2));
}

#[test]
fn poly_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "x + y - 2\n").unwrap();
    let a = run(&["scan", "--poly", path.to_str().unwrap(), "--max-slope", "3", "--json"]);
    assert!(a.status.success());
    let mut child = Command::new(env!("CARGO_BIN_EXE_torus-tangency"))
        .args(["scan", "--poly", "-", "--max-slope", "3", "--json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"x + y - 2").unwrap();
    let b = child.wait_with_output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["slopes"].as_array().unwrap().len(), 1);
}

#[test]
fn singular_text_output() {
    let out = run(&["singular", "--expr", "y^2 - 2*y + 1 - x^3 + 2*x^2 - x"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("multiplicity 2"), "{text}");
    assert!(text.contains("(-1,1)") && text.contains("(1,1)"), "{text}");
}

#[test]
fn verify_suite_passes() {
    let out = run(&["verify", "--seed", "3", "--samples", "10", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn corpus_listing() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let out = run(&["corpus", "list", dir, "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["name"] == "figure-eight knot"));
}

#[test]
fn corpus_rejects_bad_entries() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"name":"bad","source":"test","poly":"x^2*y^3 - 5","degree":5,"height":"5"}"#).unwrap();
    std::fs::write(dir.path().join("line.json"), r#"{"name":"line","source":"test","poly":"x + y - 2","degree":1,"height":"2"}"#).unwrap();
    let out = run(&["corpus", "list", dir.path().to_str().unwrap(), "--json"]);
    let v = json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
    assert_eq!(v["rejected"].as_array().unwrap().len(), 1);
    assert_eq!(out.status.code(), Some(4));
}
