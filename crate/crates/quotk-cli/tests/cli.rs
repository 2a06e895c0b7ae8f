//! End-to-end runs of the `quotk` binary: documented examples, output
//! formats and exit codes.

use std::process::{Command, Output};

use serde_json::{json, Value};

use quotk::emit::{parse_latex_matrix, parse_latex_table, table_from_json};

fn quotk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quotk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = quotk(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    quotk(args).status.code().expect("exit code")
}

fn fixture(name: &str) -> String {
    let path = format!("{}/../quotk/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn invariant_examples() {
    assert_eq!(stdout(&["invariant", "--n", "6", "--r", "2", "--lambda", "1,1", "--degree", "3"]), "60");
    assert_eq!(stdout(&["invariant", "--n", "6", "--r", "2", "--lambda", "1", "--degree", "5"]), "6");
    assert_eq!(stdout(&["invariant", "--n", "4", "--r", "2", "--lambda", "1", "--degree", "0", "--dual"]), "0");
    assert_eq!(stdout(&["invariant", "--n", "6", "--r", "2", "--lambda", "2", "--degree", "1"]), "6");
    let v: Value = serde_json::from_str(&stdout(&[
        "invariant", "--n", "6", "--r", "2", "--lambda", "2", "--degree", "1", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v, json!({"value": "6"}));
    // equivariant values are printed as exact rationals
    let eq = stdout(&["invariant", "--n", "2", "--r", "1", "--lambda", "1", "--degree", "0", "--alpha", "2,3"]);
    assert_eq!(eq, "5/6");
}

#[test]
fn grothendieck_and_series_examples() {
    assert_eq!(stdout(&["grothendieck", "--n", "6", "--r", "2", "--lambda", "9,3", "--degree", "1"]), "1");
    assert_eq!(
        stdout(&["grothendieck", "--n", "6", "--r", "2", "--lambda", "9,3", "--degree", "1", "--route", "character"]),
        "1"
    );
    assert_eq!(stdout(&["series", "--n", "6", "--r", "2", "--lambda", "2,1"]), "1/(1-q)");
    assert_eq!(stdout(&["series", "--n", "6", "--r", "2", "--lambda", "10,3"]), "-3q + q/(1-q)");
    let v: Value =
        serde_json::from_str(&stdout(&["series", "--n", "6", "--r", "2", "--lambda", "10,3", "--format", "json"])).unwrap();
    assert_eq!(v, json!({"poly": {"1": -3}, "tail_degree": 1, "tail_coeff": 1}));
    // no closed form away from level zero: truncated with an explicit order
    let v: Value = serde_json::from_str(&stdout(&[
        "series", "--n", "4", "--r", "2", "--level", "1", "--lambda", "1", "--qmax", "3", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["truncated_at"], json!(3));
}

#[test]
fn product_example() {
    let v: Value = serde_json::from_str(&stdout(&["product", "--n", "6", "--r", "2", "--lhs", "2", "--rhs", "4,1"])).unwrap();
    assert_eq!(v, json!({"4,3": {"0": 1}, "1": {"1": 1}, "2": {"1": -1}}));
    assert_eq!(
        stdout(&["product", "--n", "6", "--r", "2", "--lhs", "2", "--rhs", "4,1", "--format", "plain"]),
        "O_4,3 + q O_1 - q O_2"
    );
}

#[test]
fn tables_reproduce_the_stored_fixtures() {
    for (n, r, name) in [("6", "2", "gr26_table.tex"), ("6", "3", "gr36_table.tex")] {
        let emitted = stdout(&["qk-table", "--n", n, "--r", r, "--format", "latex"]);
        assert_eq!(parse_latex_table(&emitted).unwrap(), parse_latex_table(&fixture(name)).unwrap());
    }
    // JSON carries the unit products too
    let v: Value = serde_json::from_str(&stdout(&["qk-table", "--n", "6", "--r", "3"])).unwrap();
    let (basis, entries) = table_from_json(&v).unwrap();
    assert_eq!(basis.len(), 20);
    assert_eq!(entries.len(), 210);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = stdout(&["--threads", "1", "qk-table", "--n", "5", "--r", "2"]);
    let four = stdout(&["--threads", "4", "qk-table", "--n", "5", "--r", "2"]);
    assert_eq!(one, four);
    assert_eq!(code(&["--threads", "0", "qk-table", "--n", "5", "--r", "2"]), 2);
}

#[test]
fn pairing_matrices() {
    let inverse = stdout(&["pairing", "--n", "6", "--r", "3", "--inverse", "--format", "latex"]);
    assert_eq!(
        parse_latex_matrix(&inverse).unwrap(),
        parse_latex_matrix(&fixture("gr36_pairing_inverse.tex")).unwrap()
    );
    let forward = stdout(&["pairing", "--n", "6", "--r", "3", "--format", "latex"]);
    assert!(forward.starts_with("\\frac{1}{1-q}"));
    assert_eq!(
        parse_latex_matrix(&forward).unwrap(),
        parse_latex_matrix(&fixture("gr36_pairing.tex")).unwrap()
    );
    let v: Value = serde_json::from_str(&stdout(&["pairing", "--n", "4", "--r", "2"])).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
}

#[test]
fn checks_and_sweeps() {
    let out = stdout(&["oracle-check", "--n", "3", "--r", "2", "--degree", "1", "--lambda", "1,0"]);
    assert!(out.starts_with("PASS"), "{out}");
    let out = stdout(&["oracle-check", "--n", "4", "--r", "2", "--level", "1", "--degree", "2", "--lambda", "2,1", "--alpha", "2,-3,1/2,5/3"]);
    assert!(out.starts_with("PASS"), "{out}");
    let out = stdout(&["vanish-sweep", "--n", "4", "--r", "2", "--dmax", "4", "--box", "8"]);
    assert!(out.contains(", 0 violations"), "{out}");
    let v: Value =
        serde_json::from_str(&stdout(&["vanish-sweep", "--n", "4", "--r", "2", "--dmax", "4", "--box", "8", "--format", "json"]))
            .unwrap();
    assert_eq!(v["violations"], json!([]));
}

#[test]
fn exit_codes() {
    // invalid window
    assert_eq!(code(&["invariant", "--n", "4", "--r", "2", "--level", "3", "--lambda", "1", "--degree", "0"]), 2);
    assert_eq!(code(&["invariant", "--n", "4", "--r", "5", "--lambda", "1", "--degree", "0"]), 2);
    // truncation too small for the product
    assert_eq!(code(&["product", "--n", "6", "--r", "2", "--lhs", "2", "--rhs", "4,1", "--qmax", "1"]), 4);
    // colliding weights
    let out = quotk(&["oracle-check", "--n", "3", "--r", "1", "--degree", "1", "--lambda", "1", "--alpha", "2,2,3"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
    // unknown flags are usage errors
    assert_eq!(code(&["invariant", "--bogus"]), 2);
}
