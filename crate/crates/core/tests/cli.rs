use std::process::{Command, Output};

use markoff::markoff::{MarkoffTree, MarkoffTriple};
use markoff::{parse_poly, MarkoffContext, PrimeModulus};
use serde_json::Value;

fn markoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markoff"))
        .args(args)
        .env_remove("MARKOFF_BUDGET")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let ok = markoff(&["--p", "13", "verify", "--triple", "(t; t+2*i; t^2+2*i*t-2)"]);
    assert_eq!(ok.status.code(), Some(0));
    let no = markoff(&["--p", "13", "verify", "--triple", "(1; 1; 1)"]);
    assert_eq!(no.status.code(), Some(1));
    let bad = markoff(&["--p", "13", "verify", "--triple", "(t; t*; 1)"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains('^'));
    let big = markoff(&[
        "--p",
        "13",
        "--budget",
        "1000",
        "enumerate",
        "--max-height",
        "1",
    ]);
    assert_eq!(big.status.code(), Some(3));
    let help = markoff(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn environment_budget_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_markoff"))
        .args([
            "--p",
            "5",
            "--A",
            "t",
            "--budget",
            "1000000",
            "enumerate",
            "--max-height",
            "1",
        ])
        .env("MARKOFF_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_markoff"))
        .args([
            "--p",
            "5",
            "--A",
            "t",
            "--budget",
            "10",
            "enumerate",
            "--max-height",
            "1",
        ])
        .env("MARKOFF_BUDGET", "1000000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tree_json_round_trips() {
    let out = markoff(&[
        "--p",
        "13",
        "tree",
        "--root",
        "(t; t+2*i; t^2+2*i*t-2)",
        "--depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    fn walk(v: &Value, count: &mut usize) {
        *count += 1;
        let t: MarkoffTriple = serde_json::from_value(v["triple"].clone()).unwrap();
        assert_eq!(t.x().modulus().get(), 13);
        for c in v["children"].as_array().unwrap() {
            walk(c, count);
        }
    }
    let mut count = 0;
    walk(&v, &mut count);
    assert_eq!(count, 7);
    assert_eq!(
        v["triple"]["x"],
        serde_json::json!({"p": 13, "coeffs": [0, 1]})
    );

    let m = PrimeModulus::new(13).unwrap();
    let ctx = MarkoffContext::new(parse_poly("1", m).unwrap()).unwrap();
    let root = MarkoffTriple::new(
        parse_poly("t", m).unwrap(),
        parse_poly("t+2*i", m).unwrap(),
        parse_poly("t^2+2*i*t-2", m).unwrap(),
    );
    let tree: MarkoffTree = markoff::markoff::generate_tree(&ctx, &root, 2, 8).unwrap();
    assert_eq!(serde_json::to_value(&tree).unwrap(), v);
}

#[test]
fn dot_output() {
    let out = markoff(&[
        "--p",
        "13",
        "--format",
        "dot",
        "tree",
        "--root",
        "(t; t+2*i; t^2+2*i*t-2)",
        "--depth",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph markoff {"));
    assert_eq!(text.matches(" -> ").count(), 2);
    // no i in F_7: labels fall back to plain coefficients
    let out = markoff(&[
        "--p", "7", "--A", "t", "--format", "dot", "euclid", "--depth", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout)
            .unwrap()
            .matches(" -> ")
            .count(),
        6
    );
}

#[test]
fn enumerate_streams_json_lines() {
    let out = markoff(&[
        "--p",
        "5",
        "--A",
        "t",
        "enumerate",
        "--max-height",
        "1",
        "--convention",
        "ordered",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<MarkoffTriple> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 144);
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn census_reports_both_conventions() {
    let out = markoff(&[
        "--A",
        "t",
        "count",
        "solutions",
        "--q",
        "5",
        "--n",
        "1",
        "--brute",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let brute = v["brute"].as_array().unwrap();
    assert_eq!(brute.len(), 2);
    assert_eq!(brute[0]["convention"], "ordered");
    assert_eq!(brute[0]["per_class_ratios"]["fundamental"], "3/2");
    assert_eq!(brute[1]["convention"], "degree_sorted");
    assert_eq!(brute[1]["per_class_ratios"]["fundamental"], "1/2");
    assert_eq!(brute[1]["constant_rooted_count"], 8);
}

#[test]
fn count_solutions_for_q_three_mod_four() {
    let out = markoff(&["--A", "t", "count", "solutions", "--q", "7", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["formula"]["empty"], true);
    assert_eq!(v["formula"]["value"], 0);
}
