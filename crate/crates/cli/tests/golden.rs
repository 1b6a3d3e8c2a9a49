//! Bundled configs against checked-in outputs. Set `WEILBUND_BLESS=1` to
//! rewrite the golden files after an intended change.

mod common;

use std::fs;

use common::{config, golden_dir, run, stdout};

fn check(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("WEILBUND_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from golden:\n--- expected\n{expected}\n--- actual\n{actual}");
}

fn check_stdout(name: &str, args: &[&str]) {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", common::stderr(&out));
    check(name, &stdout(&out));
}

#[test]
fn algebra_info() {
    check_stdout(
        "algebra_info_symplectic_dual2.txt",
        &["algebra", "info", "-c", &config("symplectic_dual2")],
    );
}

#[test]
fn prolong_function() {
    check_stdout(
        "prolong_fn_symplectic_dual.txt",
        &["prolong", "fn", "-c", &config("symplectic_dual"), "--expr", "x1^2"],
    );
}

#[test]
fn prolong_poisson() {
    check_stdout(
        "prolong_poisson_so3_jet2.txt",
        &["prolong", "poisson", "-c", &config("so3_jet2")],
    );
}

#[test]
fn plift_table() {
    check_stdout(
        "plift_symplectic_dual.txt",
        &["prolong", "plift", "-c", &config("symplectic_dual")],
    );
}

#[test]
fn cohomology_with_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    check_stdout(
        "cohomology_so3_jet2.txt",
        &["cohomology", "-c", &config("so3_jet2"), "--compare", "--out", json.to_str().unwrap()],
    );
    check("cohomology_so3_jet2.json", &fs::read_to_string(json).unwrap());
}

#[test]
fn cohomology_algebra_scalars() {
    check_stdout(
        "cohomology_heisenberg_jet1_a.txt",
        &["cohomology", "-c", &config("heisenberg_jet1"), "--scalars", "A"],
    );
}

#[test]
fn verify_suite() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("suite.json");
    check_stdout(
        "verify_so3_jet2.txt",
        &[
            "verify",
            "-c",
            &config("so3_jet2"),
            "--seed",
            "7",
            "--samples",
            "5",
            "--out",
            json.to_str().unwrap(),
        ],
    );
    check("verify_so3_jet2.json", &fs::read_to_string(json).unwrap());
}
