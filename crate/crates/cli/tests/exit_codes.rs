//! Exit codes and the single-line `error: <kind>: <message>` prefix.

mod common;

use std::fs;

use common::{config, run, stderr, stdout};

fn assert_error(args: &[&str], code: i32, kind: &str) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
    let err = stderr(&out);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    let prefix = format!("error: {kind}: ");
    assert!(lines[0].starts_with(&prefix), "{err}");
    lines[0][prefix.len()..].to_string()
}

#[test]
fn algebra_info_reports_dim_and_height() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jet3.json");
    fs::write(&path, r#"{"kind": "jet", "k": 3}"#).unwrap();
    let out = run(&["algebra", "info", "-c", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("dim=4 height=3\n"));
}

#[test]
fn broken_custom_table_exits_1_with_defects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(
        &path,
        r#"{"kind": "custom", "dim": 2, "consts": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,1,"1"]], "labels": ["1","e"]}"#,
    )
    .unwrap();
    let out = run(&["algebra", "validate", "-c", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("locality: e1 is not nilpotent"), "{}", stdout(&out));
}

#[test]
fn missing_file_exits_2() {
    assert_error(&["algebra", "info", "-c", "/nonexistent/weilbund.json"], 2, "io");
}

#[test]
fn malformed_config_points_at_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"name": "x", "algebra": {"kind": "jet", "k": 1}, "poisson": {"n": 2, "brackets": []}, "colour": 1}"#,
    )
    .unwrap();
    let msg = assert_error(&["algebra", "info", "-c", path.to_str().unwrap()], 2, "config");
    assert!(msg.contains("`colour`"), "{msg}");

    fs::write(&path, r#"{"name": "x", "algebra": {"kind": "jet", "k": 1}, "poisson": {"n": "two"}}"#).unwrap();
    let msg = assert_error(&["algebra", "info", "-c", path.to_str().unwrap()], 2, "config");
    assert!(msg.contains("`poisson.n`"), "{msg}");
}

#[test]
fn parse_error_exits_2() {
    let msg = assert_error(
        &["prolong", "fn", "-c", &config("symplectic_dual"), "--expr", "x1^^2"],
        2,
        "parse",
    );
    assert!(msg.contains("offset 3"), "{msg}");
}

#[test]
fn degenerate_form_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tp.json");
    fs::write(
        &path,
        r#"{"name": "tp", "algebra": {"kind": "truncated_poly", "r": 2, "k": 1},
            "poisson": {"n": 2, "brackets": [{"i": 1, "j": 2, "poly": "1"}]},
            "p_form": ["0", "1", "0"]}"#,
    )
    .unwrap();
    assert_error(&["prolong", "plift", "-c", path.to_str().unwrap()], 1, "degenerate_form");
}

#[test]
fn invalid_structure_fails_cohomology() {
    let out = run(&["cohomology", "-c", &config("counterexample_dual")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("d_squared_zero: false"));
}

#[test]
fn zero_structure_keeps_every_cochain() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    fs::write(
        &path,
        r#"{"name": "zero", "algebra": {"kind": "real"}, "poisson": {"n": 2, "brackets": []},
            "truncation": {"p_max": 2, "weight_max": 2}}"#,
    )
    .unwrap();
    let out = run(&["cohomology", "-c", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .take_while(|l| !l.starts_with("totals"))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert_eq!(r[2], r[5], "dim vs dim_H in {r:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "-c", &config("so3_jet2"), "--claims", "C1,C3", "--seed", "7", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = run(&["verify", "-c", &config("counterexample_dual"), "--claims", "all", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("C6     counterexample_dual  FAIL"), "{}", stdout(&out));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nop.json");
    fs::write(
        &path,
        r#"{"name": "nop", "algebra": {"kind": "dual_numbers"},
            "poisson": {"n": 2, "brackets": [{"i": 1, "j": 2, "poly": "1"}]}}"#,
    )
    .unwrap();
    assert_error(&["verify", "-c", path.to_str().unwrap(), "--claims", "C10"], 2, "missing_ingredient");
    assert_error(&["verify", "--claims", "C99"], 2, "unknown_claim");
}

#[test]
fn explain_quotes_anchor() {
    let out = run(&["explain", "C7"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Representations τ and τ̃ are isomorphic"));
    assert_error(&["explain", "C99"], 2, "unknown_claim");
}

#[test]
fn usage_errors_exit_2() {
    assert_error(&["bogus"], 2, "usage");
    assert_error(&["cohomology"], 2, "usage");
}
