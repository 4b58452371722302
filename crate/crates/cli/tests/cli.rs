use std::io::Write;
use std::process::{Command, Output, Stdio};

fn kinv(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kinv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn kinv");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const GHZ: &str = r#"{"field":"rational","dims":[2,2,2],"entries":["1","0","0","0","0","0","0","1"]}"#;

#[test]
fn classifies_ghz() {
    let o = kinv(&["classify", "-"], Some(GHZ));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("signature (0,0,0;2,2,2;0)"), "{out}");
    assert!(out.contains("class C6"), "{out}");
}

#[test]
fn json_report_carries_digest_and_signature() {
    let o = kinv(&["--format", "json", "classify", "-"], Some(GHZ));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["label"], "C6");
    assert_eq!(v["signature"]["triple"], 0);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn zero_tensor_is_c0() {
    let doc = r#"{"field":"rational","dims":[2,3,4],"sparse":[]}"#;
    let o = kinv(&["classify", "-"], Some(doc));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class C0"));
}

#[test]
fn decimal_entries_are_rejected() {
    let doc = r#"{"field":"rational","dims":[2,2],"entries":["1.5","0","0","1"]}"#;
    let o = kinv(&["classify", "-"], Some(doc));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("entries[0]"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(kinv(&["bogus"], None).status.code(), Some(1));
    assert_eq!(kinv(&["table", "--family", "22d", "--d", "1"], None).status.code(), Some(1));
    assert_eq!(kinv(&["--help"], None).status.code(), Some(0));
}

#[test]
fn table_row_counts() {
    let rows = |args: &[&str]| stdout(&kinv(args, None)).lines().filter(|l| l.starts_with('C')).count();
    assert_eq!(rows(&["table", "--family", "22d", "--d", "2"]), 7);
    assert_eq!(rows(&["table", "--family", "23d", "--d", "6"]), 26);
    let out = stdout(&kinv(&["table", "--family", "bipartite", "--d1", "2", "--d2", "2"], None));
    let k1: Vec<&str> =
        out.lines().filter(|l| l.starts_with('C')).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(k1, ["2", "1", "0"]);
}

#[test]
fn discarded_class_is_an_error() {
    let o = kinv(&["representative", "--family", "22d", "--d", "3", "--label", "C9"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("discarded"));
}

#[test]
fn generic_representative_round_trips() {
    let rep = kinv(&["representative", "--family", "23d", "--d", "3", "--label", "C16", "--generic-seed", "9"], None);
    assert_eq!(rep.status.code(), Some(0));
    let o = kinv(&["classify", "-"], Some(&stdout(&rep)));
    assert!(stdout(&o).contains("class C16"), "{}", stdout(&o));
}

#[test]
fn prime_field_override_is_flagged() {
    let o = kinv(&["--field", "gf:3", "classify", "-"], Some(GHZ));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field-dependent"));
}

#[test]
fn explain3_names_the_case() {
    let o = kinv(&["--format", "json", "explain3", "-"], Some(GHZ));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["label"], "C6");
    assert_eq!(v["systems"].as_array().unwrap().len(), 6);
    let w = r#"{"field":"rational","dims":[2,2,2],"entries":["0","1","1","0","1","0","0","0"]}"#;
    let o = kinv(&["explain3", "-"], Some(w));
    assert!(stdout(&o).contains("C5"));
    let bad = r#"{"field":"rational","dims":[2,2,3],"sparse":[]}"#;
    assert_eq!(kinv(&["explain3", "-"], Some(bad)).status.code(), Some(1));
}

#[test]
fn verify_small_suite() {
    let o = kinv(&["verify", "--suite", "duality", "--samples", "10"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: PASS"));
}
