use std::path::Path;
use std::process::{Command, Output};

use montrep::run::{parse_complex, parse_spec};
use proptest::prelude::*;
use serde_json::Value;

fn montrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_montrep"))
        .args(args)
        .env_remove("MONTREP_TOL")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enum_emits_schema_one() {
    let out = montrep(&["enum", "M(1/1,1/1,1/1)", "--cases", "v"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["report"]["total"], 2);
    assert_eq!(doc["report"]["pass"], true);
    assert_eq!(doc["link"]["components"], 1);
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["enum", "M(2/0)"][..],
        &["enum", "M(2/1"],
        &["enum", "M(2/1,3/1)", "--cases", "vii"],
        &["enum", "M(2/1,3/1)", "--tol=-1"],
        &["scan", "M(3/1,3/1,3/-2)"],
        &["components", "garbage"],
    ] {
        let out = montrep(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn json_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("trefoil.json");
    let out = montrep(&[
        "enum",
        "M(1/1,1/1,1/1)",
        "--json",
        path_str(&file),
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let ok = montrep(&["verify", "--from-json", path_str(&file)]);
    assert_eq!(ok.status.code(), Some(0));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let entry = &mut doc["classes"][0]["matrices"]["Y"][0][0][1][0];
    *entry = Value::from(entry.as_f64().unwrap() + 1e-3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = montrep(&["verify", "--from-json", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_montrep"))
        .args(["verify", "M(2/1,3/1,7/1)"])
        .env("MONTREP_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["tol"], 1e-30);
}

#[test]
fn seeds_are_reproducible() {
    let a = montrep(&["enum", "M(2/1,3/1,7/1)", "--seed", "5"]);
    let b = montrep(&["enum", "M(2/1,3/1,7/1)", "--seed", "5"]);
    let c = montrep(&["enum", "M(2/1,3/1,7/1)", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn scan_reports_trefoil_minima() {
    let out = montrep(&[
        "scan",
        "M(1/1,1/1,1/1)",
        "--no-table",
        "--format",
        "json",
        "--grid",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["pass"], true);
    let roots: Vec<f64> = doc["scans"][0]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-6);
}

#[test]
fn components_and_tangle_ends() {
    let out = montrep(&["components", "M(2/1,2/1)", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["link"]["components"], 2);

    let out = montrep(&["tangle-ends", "[[2,-1,3]]", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["schema"], 1);
}

#[test]
fn dedupe_merges_trefoil_classes() {
    let out = montrep(&[
        "enum",
        "M(1/1,1/1,1/1)",
        "--cases",
        "v",
        "--dedupe",
        "characters",
    ]);
    assert_eq!(json_of(&out)["report"]["total"], 1);
}

#[test]
fn spec_parsing() {
    assert!(parse_spec("M(2/1, 3/1, 7/1)").is_ok());
    assert!(parse_spec("M()").is_err());
}

proptest! {
    #[test]
    fn complex_literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let text = format!("{re}{im:+}i");
        let z = parse_complex(&text).unwrap();
        prop_assert_eq!((z.re, z.im), (re, im));
        prop_assert_eq!(parse_complex(&format!("{re}")).unwrap().re, re);
    }
}
