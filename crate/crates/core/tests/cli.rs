use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use ore_shape::cli::parse_operator;

const I1: &str = "(Dx-1)*(Dx-2); Dy\n";
const I4: &str = "# exp(x), exp(x+y)\nDx - 1\nDy^2 - Dy\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ore-shape"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], stdin: &str) -> Value {
    let mut all = args.to_vec();
    all.extend(["-", "--json"]);
    let out = run(&all, stdin);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn documents_carry_the_schema_header() {
    for cmd in [
        "parse",
        "gb",
        "dim",
        "eliminate",
        "shape",
        "check-normal",
        "solve",
        "wronskian",
    ] {
        let doc = json(&[cmd], I1);
        assert_eq!(doc["schema"], "ore-shape/1", "{cmd}");
        assert_eq!(doc["command"], cmd);
        assert_eq!(doc["nvars"], 1);
        assert_eq!(doc["main_var"], "Dx");
        assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
        assert!(doc["timings_ms"]["total"].as_f64().unwrap() >= 0.0);
        assert!(doc["result"].is_object(), "{cmd}");
    }
}

#[test]
fn text_output_lists_the_same_operators() {
    let doc = json(&["shape"], I1);
    let out = run(&["shape", "-"], I1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("shape (main variable Dx)"));
    for op in doc["result"]["basis"].as_array().unwrap() {
        assert!(text.contains(op.as_str().unwrap()), "{op} missing from\n{text}");
    }
}

#[test]
fn printed_operators_parse_back() {
    let doc = json(&["shear", "--shear", "2"], I4);
    for op in doc["result"]["basis"].as_array().unwrap() {
        let s = op.as_str().unwrap();
        assert_eq!(parse_operator(s, 1).unwrap().to_string(), s);
    }
}

#[test]
fn file_and_stdin_give_the_same_digest() {
    let path = std::env::temp_dir().join(format!("ore-shape-cli-{}.txt", std::process::id()));
    std::fs::write(&path, I4).unwrap();
    let out = run(&["dim", path.to_str().unwrap(), "--json"], "");
    std::fs::remove_file(&path).unwrap();
    let from_file: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(from_file["input_digest"], json(&["dim"], I4)["input_digest"]);
    assert_eq!(from_file["result"]["r"], 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str], input: &str| run(args, input).status.code();
    assert_eq!(code(&["shape", "-"], I1), Some(0));
    assert_eq!(code(&["gb", "-"], "Dx +\n"), Some(2));
    assert_eq!(code(&["shape", "-", "--main-var", "Dz"], I4), Some(2));
    assert_eq!(code(&["bogus", "-"], I4), Some(2));
    assert_eq!(code(&["shape", "-"], I4), Some(3));
    assert_eq!(code(&["normalize", "-", "--max-attempts", "1"], I4), Some(5));
    assert_eq!(code(&["gb", "/nonexistent/ideal.txt"], ""), Some(1));
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["gb", "-"], "Dx +\n");
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column 5"), "{err}");
}

#[test]
fn main_variable_swap_reports_failure_for_dy() {
    assert_eq!(json(&["check-normal"], I1)["result"]["normal_position"], true);
    let doc = json(&["check-normal", "--main-var", "Dy"], I1);
    assert_eq!(doc["main_var"], "Dy");
    assert_eq!(doc["result"]["normal_position"], false);
}

#[test]
fn gauge_and_normalize_end_to_end() {
    let doc = json(&["gauge", "--cyclic", "x + Dy"], I4);
    assert_eq!(doc["result"]["P"], "Dx^2 - 2*Dx + 1");
    let doc = json(&["normalize", "--seed", "3"], I4);
    let p = doc["result"]["P"].as_str().unwrap();
    assert_eq!(parse_operator(p, 1).unwrap().order(), 2);
}
