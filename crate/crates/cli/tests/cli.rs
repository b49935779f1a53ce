use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qsocount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsocount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

const OR2: &str = "p d2s 2 1\nd 1\n1 2 0\n";

#[test]
fn count_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "f.d2s");
    std::fs::write(&f, OR2).unwrap();
    let brute = json(&qsocount(&["count", &f]));
    assert_eq!(brute["count"], 3);
    assert_eq!(brute["method"], "brute");
    assert!(brute["nodes_explored"].is_null());
    let sr = json(&qsocount(&["count", "--method", "selfreduce", &f]));
    assert_eq!(sr["count"], 3);
    assert!(sr["nodes_explored"].as_u64().unwrap() >= 1);
}

#[test]
fn count_monotone_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "m.cnf");
    std::fs::write(&f, "c two clauses\np cnf 3 2\n1 2 0\n2 3 0\n").unwrap();
    assert_eq!(json(&qsocount(&["count", &f]))["count"], 5);
}

#[test]
fn usage_errors_exit_2() {
    let out = qsocount(&["count", "--bogus", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qsocount(&["estimate", "--eps", "0.1", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qsocount(&["check", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let out = qsocount(&["estimate", "--miller-rabin", "4", "--eps", "0.1", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[approx]"));
    let out = qsocount(&["estimate", "--fp", "3", "--eps", "0", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "bad.d2s");
    std::fs::write(&f, "p d2s 2 1\nd 1\n1 5 0\n").unwrap();
    let out = qsocount(&["count", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[propcount]"));
    let out = qsocount(&["count", &path(dir.path(), "missing.d2s")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn encode_then_eval_recovers_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("f.d2s"), OR2).unwrap();
    json(&qsocount(&["encode", "d2s", &path(d, "f.d2s"), "-o", &path(d, "enc")]));
    let v = json(&qsocount(&[
        "eval", "--structure", &path(d, "enc.fst"), "--formula", &path(d, "enc.qso"),
    ]));
    assert_eq!(v["value"], 3);

    std::fs::write(d.join("p3.gr"), "p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
    let enc = json(&qsocount(&["encode", "vc", &path(d, "p3.gr"), "-o", &path(d, "vc")]));
    assert_eq!(enc["correction_exponent"], 2);
    let v = json(&qsocount(&[
        "eval", "--structure", &path(d, "vc.fst"), "--formula", &path(d, "vc.pi2"), "--kind", "pi2",
    ]));
    assert_eq!(v["value"], 20);
}

#[test]
fn reduce_d2s_writes_formula_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("a.fst"), "structure\nuniverse 2\nend\n").unwrap();
    std::fs::write(d.join("alpha.qso"), "sum X:1 . exists . forall u . [ X(u) ]\n").unwrap();
    qsocount(&[
        "reduce", "d2s", "--structure", &path(d, "a.fst"), "--formula", &path(d, "alpha.qso"),
        "-o", &path(d, "out.d2s"),
    ]);
    let count = json(&qsocount(&["count", &path(d, "out.d2s")]));
    assert_eq!(count["count"], 1);
    let table: Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("out.d2s.json")).unwrap()).unwrap();
    assert_eq!(table["atoms"].as_array().unwrap().len(), 2);
    assert_eq!(table["selectors"].as_array().unwrap().len(), 1);
}

#[test]
fn check_and_replay() {
    let r = json(&qsocount(&["check", "--suite", "selfreduce", "--trials", "30"]));
    assert_eq!(r["failures"], 0);
    assert_eq!(r["trials"], 30);
    let r = json(&qsocount(&["check", "--suite", "roundtrip", "--replay", "12345"]));
    assert_eq!(r["failures"], 0);
    assert_eq!(r["trials"], 1);
}

#[test]
fn estimate_fp_is_exact_on_full_domains() {
    let r = json(&qsocount(&["estimate", "--fp", "64", "--eps", "0.1", "--delta", "0.1"]));
    assert_eq!(r["estimate"], 64.0);
    assert_eq!(r["domain_size"], 64);
    let r = json(&qsocount(&["estimate", "--fp", "0", "--eps", "0.1", "--delta", "0.1"]));
    assert_eq!(r["estimate"], 0.0);
}

fn assert_matches_schema(def: &str, v: &Value) {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/schema.json")).unwrap();
    let mut required: Vec<&str> = schema["$defs"][def]["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_str().unwrap())
        .collect();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    required.sort_unstable();
    keys.sort_unstable();
    assert_eq!(keys, required, "{def}");
}

#[test]
fn outputs_follow_schema() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("f.d2s"), OR2).unwrap();
    std::fs::write(d.join("m.cnf"), "p cnf 2 1\n1 2 0\n").unwrap();
    std::fs::write(d.join("a.fst"), "structure\nuniverse 2\nrel E 2\n0 1\nend\nend\n").unwrap();
    std::fs::write(d.join("alpha.qso"), "sum X:1 . forall u . [ X(u) | ~X(u) ]\n").unwrap();
    std::fs::write(d.join("s.pi2"), "pivar X:1 . forall y . exists z . { E(y,z) | y = z } & X(z)\n").unwrap();
    let (f, m, a) = (path(d, "f.d2s"), path(d, "m.cnf"), path(d, "a.fst"));
    let cases: Vec<(&str, Vec<String>)> = vec![
        ("eval", vec!["eval".into(), "--structure".into(), a.clone(), "--formula".into(), path(d, "alpha.qso")]),
        ("count", vec!["count".into(), f.clone()]),
        ("estimate", vec!["estimate".into(), "--d2s".into(), f.clone(), "--eps".into(), "0.3".into(), "--delta".into(), "0.2".into()]),
        ("check", vec!["check".into(), "--suite".into(), "product".into(), "--trials".into(), "3".into()]),
        ("encode", vec!["encode".into(), "mono".into(), m, "-o".into(), path(d, "enc")]),
        ("reduce_d2s", vec!["reduce".into(), "d2s".into(), "--structure".into(), a.clone(), "--formula".into(), path(d, "alpha.qso"), "-o".into(), path(d, "r.d2s")]),
        ("reduce_monotone", vec!["reduce".into(), "monotone".into(), "--structure".into(), a, "--spec".into(), path(d, "s.pi2"), "-o".into(), path(d, "r.cnf")]),
    ];
    for (def, args) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_matches_schema(def, &json(&qsocount(&args)));
    }
    let table: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.d2s.json")).unwrap()).unwrap();
    assert_matches_schema("atom_table", &table);
    let product: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.cnf.json")).unwrap()).unwrap();
    assert_matches_schema("product_sidecar", &product);
}
