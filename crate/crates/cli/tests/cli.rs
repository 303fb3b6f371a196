use std::process::{Command, Output};

fn qfinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfinv")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qfinv(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn diagonalizes_and_decomposes() {
    assert_eq!(stdout(&["qf", "diag", "--diag", "1,-2,3"]).trim(), "<1, -2, 3>");
    let w = json(&["qf", "witt", "--diag", "1,-1,2"]);
    assert_eq!(w["index"], 1);
    assert_eq!(w["kernel"]["entries"], serde_json::json!(["2"]));
}

#[test]
fn brauer_class_and_realization() {
    assert_eq!(stdout(&["br", "class", "-a", "-1", "-b", "3"]).trim(), "{2,3}");
    let r = json(&["br", "realize", "--ramified", "2,3"]);
    let (a, b) = (r["a"].as_str().unwrap(), r["b"].as_str().unwrap());
    assert_eq!(stdout(&["br", "class", "-a", a, "-b", b]).trim(), "{2,3}");
}

#[test]
fn invariants_of_the_sum_of_four_squares() {
    assert_eq!(stdout(&["inv", "e0", "--diag", "1,1,1"]).trim(), "1");
    assert_eq!(stdout(&["inv", "e2", "--diag", "1,1,1,1"]).trim(), "{2,inf}");
}

#[test]
fn round_trips_succeed() {
    assert_eq!(json(&["exc", "roundtrip", "-1", "3"])["holds"], true);
    let p = json(&["exc", "roundtrip", "2", "3", "5", "7"]);
    assert_eq!(p["holds"], true);
    assert_eq!(p["alternating_dim"], 6);
}

#[test]
fn dedekind_commands() {
    let c = json(&["ded", "clgrp", "-d", "-5"]);
    let labels: Vec<&str> = c["representatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["O", "p2"]);
    let o = json(&["ded", "clifford-order", "-d", "-5", "--value", "p2"]);
    assert_eq!(o["product_of_two_orders"], true);
    assert_eq!(o["dim"], 2);
}

#[test]
fn suites_are_reproducible() {
    let a = stdout(&["--json", "--seed", "7", "suite", "center-law", "--parallelism", "2"]);
    let b = stdout(&["--json", "--seed", "7", "suite", "center-law"]);
    assert_eq!(a, b);
    assert_eq!(stdout(&["suite", "list"]).lines().count(), 14);
}

#[test]
fn convert_writes_canonical_json() {
    let dir = std::env::temp_dir().join(format!("qfinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("form.json");
    std::fs::write(&input, r#"{"base": "Q", "gram": [["1", "0"], ["0", "-3"]]}"#).unwrap();
    let output = dir.join("out.json");
    stdout(&["convert", input.to_str().unwrap(), output.to_str().unwrap(), "--kind", "form"]);
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(written["base"], "Q");
    assert_eq!(stdout(&["qf", "disc", "--file", input.to_str().unwrap()]).trim(), "3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qfinv(&["qf", "diag", "--diag", "1,x"]).status.code(), Some(2));
    assert_eq!(qfinv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qfinv(&["suite", "no-such-suite"]).status.code(), Some(2));
    let bound = Command::new(env!("CARGO_BIN_EXE_qfinv"))
        .args(["br", "class", "-a", "1000003", "-b", "3"])
        .env("QF_FACTOR_BOUND", "10")
        .output()
        .unwrap();
    assert_eq!(bound.status.code(), Some(3));
}
