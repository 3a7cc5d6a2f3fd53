//! Golden-file tests for the `segalis` command-line interface.
//!
//! Each case runs the compiled binary and compares stdout byte-for-byte
//! against a file committed under `tests/golden/`. Exit codes are pinned
//! as well: 0 for a passing check, 1 for a mathematically failing check,
//! 2 for invalid usage or out-of-range parameters.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segalis"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("failed to launch segalis binary")
}

fn golden(name: &str) -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str, expected_code: i32) {
    let out = run(args);
    let code = out.status.code().expect("process terminated by signal");
    assert_eq!(
        code,
        expected_code,
        "exit code mismatch for {args:?}; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    if out.stdout != golden(name) {
        panic!(
            "stdout mismatch for {args:?} vs golden {name}\n--- got ---\n{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn boundary_text_output() {
    assert_golden(
        &["boundary", "--n", "4", "--d", "3", "--side", "upper"],
        "boundary_n4_d3_upper.txt",
        0,
    );
}

#[test]
fn boundary_json_output() {
    assert_golden(
        &["boundary", "--n", "4", "--d", "2", "--side", "lower", "--format", "json"],
        "boundary_n4_d2_lower.json",
        0,
    );
}

#[test]
fn boundary_rejects_degenerate_parameters() {
    let out = run(&["boundary", "--n", "2", "--d", "2", "--side", "lower"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn triangulation_counts() {
    assert_golden(
        &["triangulations", "--n", "5", "--d", "2", "--emit", "count"],
        "triangulations_n5_d2_count.txt",
        0,
    );
    let four = run(&["triangulations", "--n", "4", "--d", "2", "--emit", "count"]);
    assert_eq!(String::from_utf8_lossy(&four.stdout).trim(), "5");
    let odd = run(&["triangulations", "--n", "4", "--d", "3", "--emit", "count"]);
    assert_eq!(String::from_utf8_lossy(&odd.stdout).trim(), "2");
}

#[test]
fn triangulation_list_graph_hasse() {
    assert_golden(
        &["triangulations", "--n", "4", "--d", "2", "--emit", "list"],
        "triangulations_n4_d2_list.txt",
        0,
    );
    assert_golden(
        &["triangulations", "--n", "4", "--d", "2", "--emit", "graph", "--format", "dot"],
        "flipgraph_n4_d2.dot",
        0,
    );
    assert_golden(
        &["triangulations", "--n", "4", "--d", "2", "--emit", "hasse"],
        "hasse_n4_d2.txt",
        0,
    );
}

#[test]
fn oriental_cells_and_axioms() {
    assert_golden(&["oriental", "--n", "3", "--d", "1"], "oriental_n3_d1.txt", 0);
    assert_golden(&["oriental", "--n", "3", "--axioms"], "oriental_n3_axioms.txt", 0);
}

#[test]
fn check_nerve_is_lower_1_segal() {
    assert_golden(
        &["check", "--input", "fixtures/nerve_z2.json", "--lower", "1"],
        "check_nerve_lower1.txt",
        0,
    );
}

#[test]
fn check_doldkan_passing_conditions() {
    assert_golden(
        &[
            "check",
            "--input",
            "fixtures/doldkan_m1.json",
            "--lower",
            "2",
            "--upper",
            "2",
            "--dk",
            "1",
        ],
        "check_doldkan_m1.txt",
        0,
    );
}

#[test]
fn check_doldkan_failing_condition_reports_witness() {
    assert_golden(
        &["check", "--input", "fixtures/doldkan_m2.json", "--lower", "2"],
        "check_doldkan_m2_lower2.txt",
        1,
    );
}

#[test]
fn check_triangulation_independence_json() {
    assert_golden(
        &[
            "check",
            "--input",
            "fixtures/pmonoid_subsets2.json",
            "--independence",
            "--n",
            "4",
            "--d",
            "2",
            "--format",
            "json",
        ],
        "check_pmonoid_independence.json",
        0,
    );
}

#[test]
fn check_missing_input_is_usage_error() {
    let out = run(&["check", "--input", "fixtures/no_such_file.json", "--lower", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["oriental", "--n", "4", "--d", "2", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn generators_reproduce_committed_fixtures() {
    for (args, fixture) in [
        (
            vec!["gen", "nerve", "--kind", "z2", "--trunc", "4"],
            "fixtures/nerve_z2.json",
        ),
        (
            vec!["gen", "pmonoid", "--k", "2", "--trunc", "4"],
            "fixtures/pmonoid_subsets2.json",
        ),
        (
            vec!["gen", "doldkan", "--dims", "1,1", "--trunc", "4"],
            "fixtures/doldkan_m1.json",
        ),
        (
            vec!["gen", "doldkan", "--dims", "1,0,1", "--trunc", "4"],
            "fixtures/doldkan_m2.json",
        ),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "gen failed: {args:?}");
        let expected =
            std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join(fixture)).unwrap();
        assert_eq!(out.stdout, expected, "fixture drift: {fixture}");
    }
}
