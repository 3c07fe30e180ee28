use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn nfstrat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfstrat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Runs with `--format json`, validates against the named schema, and
/// returns the document and exit code.
fn json(schema: &str, args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = nfstrat(&all);
    let doc: Value = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&o.stderr)));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{args:?} does not match {schema}: {msgs:?}\n{doc:#}");
    }
    (doc, o.status.code().unwrap())
}

#[test]
fn canon_three_cycle() {
    let (doc, code) = json("indexing", &["canon", "--phf", "x in y & y in z & z in x"]);
    assert_eq!(code, 0);
    let idx: Vec<u64> = doc["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["index"].as_u64().unwrap())
        .collect();
    assert_eq!(idx, [6, 7, 7, 8, 8, 9]);
    assert_eq!(doc["sum"], 4);
    assert_eq!(doc["vars"], 3);
    assert_eq!(doc["stratified"], false);
    assert_eq!(doc["rng"], serde_json::json!({"x": 2, "y": 1, "z": 1}));
    assert_eq!(doc["setlike_bound"], 12);
    assert_eq!(
        doc["phf"],
        "j^6'f(x) in j^7'f(y) & j^7'f(y) in j^8'f(z) & j^8'f(z) in j^9'f(x)"
    );
}

#[test]
fn acyclic_square() {
    let (doc, _) = json("indexing", &["acyclic", "--dot", "x in y & z in y & k in x & k in z"]);
    let idx: Vec<u64> = doc["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["index"].as_u64().unwrap())
        .collect();
    assert_eq!(idx, [1, 2, 3, 2, 2, 1, 4, 3]);
    assert_eq!(doc["sum"], 5);
    assert_eq!(doc["vars"], 4);
    assert_eq!(doc["acyclic"], false);
    assert_eq!(doc["graph_acyclic"], false);
    assert!(doc["dot"].as_str().unwrap().starts_with("graph G {"));
}

#[test]
fn stratify_outputs() {
    let (doc, _) = json("stratify", &["stratify", "x in x"]);
    assert_eq!(doc["stratified"], false);
    assert_eq!(doc["net_weight"], 1);
    assert_eq!(doc["cycle"][0]["from"], "x");
    let (doc, _) = json("stratify", &["stratify", "x in y & z in y & k in x & k in z"]);
    assert_eq!(doc["types"], serde_json::json!({"k": 0, "x": 1, "y": 2, "z": 1}));
}

#[test]
fn parse_output_and_file_input() {
    let (doc, _) = json("parse", &["parse", "all z:V. (z in y <-> ~z = w)"]);
    assert_eq!(doc["occurrences"], 4);
    assert_eq!(doc["free"], serde_json::json!(["y", "w"]));
    let file = fixture("three-cycle.txt");
    let (doc, _) = json("indexing", &["canon", "--file", file.to_str().unwrap()]);
    assert_eq!(doc["sum"], 4);
}

#[test]
fn text_and_json_agree() {
    for (cmd, text) in [
        ("canon", "x in y & y in z & z in x"),
        ("canon", "x in y & y in z"),
        ("acyclic", "x in y & y in z"),
        ("acyclic", "x in y & y = x"),
    ] {
        let t = stdout(&nfstrat(&[cmd, text]));
        let (doc, _) = json("indexing", &[cmd, text]);
        let key = if cmd == "canon" { "stratified" } else { "acyclic" };
        let verdict_line = t.lines().find(|l| l.starts_with("sum")).unwrap();
        let negative = verdict_line.ends_with("unstratified") || verdict_line.ends_with("not acyclic");
        assert_eq!(doc[key].as_bool().unwrap(), !negative, "{cmd} {text}");
        assert!(verdict_line.starts_with(&format!("sum {}", doc["sum"])));
    }
}

#[test]
fn expect_sets_the_exit_code() {
    let code = |args: &[&str]| nfstrat(args).status.code().unwrap();
    assert_eq!(code(&["--expect", "stratified", "stratify", "x in y"]), 0);
    assert_eq!(code(&["--expect", "stratified", "stratify", "x in x"]), 1);
    assert_eq!(code(&["--expect", "unstratified", "canon", "x in y & y in x"]), 0);
    assert_eq!(code(&["--expect", "acyclic", "acyclic", "x in y & y in z"]), 0);
    assert_eq!(code(&["--expect", "cyclic", "acyclic", "x in y & y in z"]), 1);
    assert_eq!(code(&["--expect", "violated", "model", "demo", "russell"]), 0);
    assert_eq!(code(&["--expect", "invariant", "model", "demo", "russell"]), 1);
    // wrong family, and no outcome at all
    assert_eq!(code(&["--expect", "acyclic", "stratify", "x in y"]), 2);
    assert_eq!(code(&["--expect", "acyclic", "parse", "x in y"]), 2);
    // without --expect, analysis commands succeed either way
    assert_eq!(code(&["stratify", "x in x"]), 0);
    assert_eq!(code(&["--format", "json", "stratify", "x in x"]), 0);
}

#[test]
fn usage_errors_exit_2() {
    let o = nfstrat(&["canon", "x in"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(nfstrat(&["stratify", "all in y"]).status.code(), Some(2));
    assert_eq!(nfstrat(&["compare", "--max-atoms", "0"]).status.code(), Some(2));
    assert_eq!(nfstrat(&["compare", "--max-atoms", "9"]).status.code(), Some(2));
    assert_eq!(nfstrat(&["model", "demo", "cantor"]).status.code(), Some(2));
    assert_eq!(nfstrat(&["--format", "yaml", "parse", "x in y"]).status.code(), Some(2));
}

#[test]
fn compare_small_bounds() {
    let (doc, code) = json("compare", &["compare", "--max-atoms", "1", "--max-vars", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["formulas"], 4);
    assert_eq!(doc["stratified"], 3);
    assert_eq!(doc["acyclic"], 2);
    let (doc, code) = json("compare", &["compare", "--max-atoms", "3", "--max-vars", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["canonical_disagreements"], serde_json::json!([]));
    let (a, _) = json("compare", &["compare", "--max-atoms", "3", "--max-vars", "3"]);
    assert_eq!(doc, a);
}

#[test]
fn compare_reports_minimality_mismatches() {
    let (doc, code) = json(
        "compare",
        &["compare", "--max-atoms", "2", "--max-vars", "2", "--minimality"],
    );
    assert_eq!(code, 1);
    let m = doc["minimality"]["mismatches"].as_array().unwrap();
    assert!(m.iter().any(|x| x["formula"] == "v0 in v0 & v0 in v0"));
}

#[test]
fn demos_via_cli() {
    let (doc, code) = json("invariance", &["model", "demo", "russell"]);
    assert_eq!(code, 1);
    assert_eq!(doc["verdict"], "violated");
    assert_eq!(doc["confirms"], true);
    assert!(doc["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v["permutation"] == serde_json::json!([1, 0]) && v["witness"] == 1));

    let (doc, code) = json("invariance", &["model", "demo", "set-union"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "invariant");
    assert_eq!(doc["levels"]["A"], 1);

    let t = stdout(&nfstrat(&["model", "demo", "lesniewski"]));
    assert!(t.contains("verdict: violated"));
}

#[test]
fn model_check_with_constraint_file() {
    let model = fixture("union.json");
    let constraints = fixture("union-constraints.json");
    let args = [
        "model",
        "check",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "ex z. (z in A & y in z)",
        "--constraints",
        constraints.to_str().unwrap(),
    ];
    let (doc, code) = json("invariance", &args);
    assert_eq!(code, 0);
    assert_eq!(doc["class"], serde_json::json!([0, 1]));
    assert_eq!(doc["levels"], serde_json::json!({"A": 1, "_class": 0}));

    // above the limit: refused without a seed, sampled with one
    let mut limited = vec!["--limit", "4"];
    limited.extend_from_slice(&args);
    assert_eq!(nfstrat(&limited).status.code(), Some(2));
    let mut seeded = vec!["--seed", "7"];
    seeded.extend_from_slice(&limited);
    seeded.extend_from_slice(&["--draws", "50"]);
    let (doc, _) = json("invariance", &seeded);
    assert_eq!(doc["sampling"], serde_json::json!({"seed": 7, "draws": 50}));
    let (again, _) = json("invariance", &seeded);
    assert_eq!(doc, again);
}

#[test]
fn automorphisms_of_fixtures() {
    let chain = fixture("chain3.json");
    let (doc, code) = json(
        "automorphisms",
        &["model", "automorphisms", "--model", chain.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!(doc["automorphisms"].as_array().unwrap().len(), 1);
    assert_eq!(doc["automorphisms"][0]["cycles"], "id");

    let quines = fixture("quine-pair.json");
    let (doc, _) = json(
        "automorphisms",
        &["model", "automorphisms", "--model", quines.to_str().unwrap()],
    );
    let list = doc["automorphisms"].as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert!(list.iter().all(|a| a["j_lift_fixed"] == true));
}
