use std::io::Write;
use std::process::{Command, Output, Stdio};

fn crossout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossout")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn encode_worked_example() {
    let out = crossout(&["encode", "2 6 4 1 3 11 5 7 10 12 9 8"]);
    assert!(out.status.success());
    let tuple: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let pa = tuple["pa"].as_str().unwrap();
    let downs: Vec<usize> = pa.chars().enumerate().filter(|(_, c)| *c == 'D').map(|(i, _)| i + 1).collect();
    assert_eq!(downs, vec![2, 6, 7, 10, 11, 12]);
}

#[test]
fn decode_inverts_encode() {
    let tuple = stdout(&crossout(&["encode", "3 1 4 5 2"]));
    let out = crossout(&["decode", tuple.trim()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3 1 4 5 2");

    let out = crossout(&["decode", "--pa", "UD", "--pb", "UDUD", "--ell", "1", "--em", "1", "--json"]);
    assert_eq!(stdout(&out).trim(), r#"{"w":[1,2]}"#);
}

#[test]
fn verify_double_factorials_to_eight() {
    let out = crossout(&["verify", "--suite", "corollary5", "--n", "8", "--json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 16);
    let odd8: serde_json::Value = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|r| r["id"] == "cor5_odd" && r["n"] == 8)
        .unwrap();
    assert_eq!(odd8["left"]["integer"], "2027025");
    assert_eq!(odd8["verdict"], "equal");
}

#[test]
fn verify_refuses_past_guard() {
    let out = crossout(&["verify", "--suite", "thm2", "--max-n", "6"]);
    assert!(!out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("force"));
}

#[test]
fn prob_is_exact() {
    let out = crossout(&["prob", "--n", "2", "--ranks", "3,4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2/3");
}

#[test]
fn malformed_input_is_a_usage_error() {
    assert!(!crossout(&["encode", "1 1"]).status.success());
    assert!(!crossout(&["decode", "{}"]).status.success());
    assert!(!crossout(&["prob", "--n", "2"]).status.success());
}

#[test]
fn play_single_morsel() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crossout"))
        .args(["play", "--w", "1", "--role", "bob"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("game over"));
    assert!(text.contains("Bob ate positions 1"));
}
