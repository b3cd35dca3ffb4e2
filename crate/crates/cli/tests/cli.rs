use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const P2: &str = r#"{"name": "p2", "dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3], [1, 3]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-bundle")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fan_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn validate_p2_file() {
    let f = fan_file(P2);
    let o = run(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "smooth complete fan, d=3, m=3");
}

#[test]
fn missing_cone_reports_wall() {
    let f = fan_file(r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3]]}"#);
    let o = run(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("wall {1} on 1 cone"), "{}", stdout(&o));

    let o = run(&["order", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ordering requires complete fan"), "{}", stderr(&o));
}

#[test]
fn malformed_json_is_usage_error() {
    let f = fan_file(r#"{"dim": 2, "rays": [[1, 0],, }"#);
    let o = run(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("offset"), "{}", stderr(&o));
}

#[test]
fn reduce_linear_generator() {
    let f = fan_file(P2);
    let o = run(&["reduce", path(&f), "--mode", "additive", "--poly", "x1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["text"], serde_json::json!(["r1 - r2", "1", "0"]));
}

#[test]
fn reduce_non_face_is_zero() {
    let o = run(&["reduce", "p2", "--poly", "x1*x2*x3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["text"], serde_json::json!(["0", "0", "0"]));
}

#[test]
fn unknown_generator() {
    let o = run(&["reduce", "p2", "--poly", "x9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown generator"));
}

#[test]
fn exhaustive_orders_of_p1xp1() {
    let o = run(&["order", "p1xp1", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("24 orders checked"), "{}", stdout(&o));

    let o = run(&["order", "p1xp1", "--exhaustive", "--require-star-prime", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let with_prime = v["valid"].as_u64().unwrap();
    assert!(with_prime > 0 && with_prime <= 24);
}

#[test]
fn file_order_is_respected() {
    let f = fan_file(
        r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3], [1, 3]], "order": [2, 1, 3]}"#,
    );
    let o = run(&["present", path(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], serde_json::json!([2, 1, 3]));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "hirzebruch_1", "--mode", "multiplicative"][..],
        &["present", "oda_84", "--mode", "multiplicative"][..],
        &["order", "bl_p2", "--seed", "7", "--json"][..],
    ] {
        let a = run(args);
        let b = run(&[args, &["--jobs", "1"][..]].concat());
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn catalog_round_trips() {
    let o = run(&["catalog", "hirzebruch_2"]);
    assert_eq!(o.status.code(), Some(0));
    let f = fan_file(&stdout(&o));
    let from_file = run(&["table", path(&f), "--mode", "multiplicative"]);
    let from_name = run(&["table", "hirzebruch_2", "--mode", "multiplicative"]);
    assert_eq!(from_file.stdout, from_name.stdout);
}

#[test]
fn specialized_table_and_betti() {
    let o = run(&["table", "p2", "--specialize", "r=0", "--text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e2 * e2 = x{1,3}"), "{}", stdout(&o));

    let o = run(&["table", "p1", "--mode", "multiplicative", "--specialize", "r1=2"]);
    assert_eq!(o.status.code(), Some(2), "non-unit value in multiplicative mode");

    let o = run(&["betti", "p3"]);
    assert_eq!(stdout(&o).trim(), "1 1 1 1");
}

#[test]
fn check_passes_on_catalog_fan() {
    let o = run(&["check", "bl_p2", "--samples", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn bad_flag_is_usage_error() {
    assert_eq!(run(&["reduce", "p2"]).status.code(), Some(2));
    assert_eq!(run(&["betti", "no_such_fan"]).status.code(), Some(2));
}
