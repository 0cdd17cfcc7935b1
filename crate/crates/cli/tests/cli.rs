use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_craig-gamma"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("one JSON document");
    (out.status.code().unwrap(), v)
}

#[test]
fn parse_prints_canonical_form() {
    let out = run(&["parse", "([]p) -> (<>q)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[]p -> <>q");
}

#[test]
fn bad_formula_is_a_usage_error() {
    let out = run(&["check", "p &"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_valid_and_invalid() {
    let (code, v) = json(&["check", "--logic", "S4", "[]p -> [][]p"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("valid")));
    assert_eq!(v["v"], 1);

    let (code, v) = json(&["check", "--logic", "S4", "<>[]p -> []<>p"]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("invalid")));
    assert!(v["countermodel"]["worlds"].as_array().unwrap().len() >= 2);

    let (code, _) = json(&["check", "--logic", "S4.2", "<>[]p -> []<>p"]);
    assert_eq!(code, 0);
}

#[test]
fn countermodel_file_round_trips_through_refine() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let sigma = dir.path().join("sigma.txt");
    let refined = dir.path().join("r.json");
    let out = run(&[
        "check",
        "[]<>p -> <>[]p",
        "--countermodel-out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&sigma, "# generators\n<>p\n\n[]<>p  # boxed\n").unwrap();
    let (code, v) = json(&[
        "refine",
        model.to_str().unwrap(),
        "--sigma",
        sigma.to_str().unwrap(),
        "--m",
        "1",
        "--n",
        "1",
        "--out",
        refined.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    let text = std::fs::read_to_string(&refined).unwrap();
    let file: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(file["order"].as_array().unwrap().len(), 3);
}

#[test]
fn interpolate_reports_interpolant_or_countermodel() {
    let (code, v) = json(&["interpolate", "p & q", "q | r"]);
    assert_eq!(code, 0);
    assert_eq!(v["interpolant"], "q");

    let (code, v) = json(&["interpolate", "p", "q"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"], "not_valid");
}

#[test]
fn frame_formula_variants() {
    let (code, v) = json(&["frame-formula", "--cluster", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["conjuncts"].as_array().unwrap().len(), 3);

    let (_, omega) = json(&["frame-formula", "--gamma", "w"]);
    assert_eq!(omega["formula"], "true");

    let (code, v) = json(&[
        "frame-formula",
        "--gamma",
        "1",
        "--subst",
        "p",
        "--subst",
        "~p",
    ]);
    assert_eq!(code, 0);
    assert!(!v["formula"].as_str().unwrap().contains("p1"));

    assert_eq!(
        run(&["frame-formula", "--frame", "0-x"]).status.code(),
        Some(2)
    );
}

#[test]
fn smorynski_model_is_reported() {
    let (code, v) = json(&[
        "smorynski",
        "--logic",
        "G(KC,1,1)",
        "--left",
        "p",
        "--right",
        "<>p",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["confluent"], true);
    assert!(v["worlds"].as_u64().unwrap() >= 2);
}

#[test]
fn catalog_counts() {
    let (code, v) = json(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!((v["cip"].as_u64(), v["dip"].as_u64()), (Some(37), Some(49)));
}

#[test]
fn selftest_runs_named_suites() {
    let out = run(&["selftest", "--suite", "catalog"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    assert_eq!(run(&["selftest", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn unknown_logic_is_a_usage_error() {
    assert_eq!(
        run(&["check", "--logic", "G(Foo,1,1)", "p"]).status.code(),
        Some(2)
    );
}
