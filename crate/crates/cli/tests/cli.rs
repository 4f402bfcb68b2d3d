use std::process::{Command, Output};

use serde_json::Value;

fn levyhunt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levyhunt")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = levyhunt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn chain_ids(v: &Value) -> Vec<String> {
    v["chain"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap().to_string()).collect()
}

#[test]
fn exponent_rows() {
    let v = json(&["exponent", "preset:brownian", "--z", "2"]);
    let row = &v["rows"][0];
    assert_eq!(row["re"], 2.0);
    assert_eq!(row["im"], 0.0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drift.json");
    std::fs::write(&path, r#"{"dim": 1, "a": [1.0], "Q": [[0.0]]}"#).unwrap();
    let out = levyhunt(&["exponent", path.to_str().unwrap(), "--z", "3", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let cols: Vec<f64> = text.lines().nth(1).unwrap().split('\t').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols[3], 1.0);
    assert!((cols[4] - 10f64.sqrt()).abs() < 1e-15);

    let v = json(&["exponent", "preset:brownian-2d", "--z", "1,2", "--grid-min", "0", "--grid-max", "1", "--per-decade", "2"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["rows"][0]["re"], 2.5);
}

#[test]
fn spec_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"dim\": 1,\n  \"a\": [0\n").unwrap();
    let out = levyhunt(&["exponent", bad.to_str().unwrap(), "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let extra = dir.path().join("extra.json");
    std::fs::write(&extra, r#"{"dim": 1, "a": [0], "Q": [[1]], "colour": "red"}"#).unwrap();
    assert_eq!(levyhunt(&["classify", extra.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(levyhunt(&["check", "preset:brownian", "--condition", "nope"]).status.code(), Some(2));
    assert_eq!(levyhunt(&["check", "preset:brownian", "--condition", "thm25"]).status.code(), Some(2));
    assert_eq!(levyhunt(&["classify", "preset:nope"]).status.code(), Some(2));
    assert_eq!(levyhunt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_examples() {
    assert_eq!(json(&["check", "preset:example-2.9", "--condition", "thm26"])["verdict"], "holds");
    assert_eq!(json(&["check", "preset:brownian", "--condition", "nd"])["verdict"], "holds");
    assert_eq!(json(&["check", "preset:symmetric-stable-0.5", "--condition", "thm26"])["verdict"], "fails");
    let v = json(&["check", "preset:asymmetric-cauchy", "--condition", "rao", "--family", "log:2"]);
    assert_eq!(v["chain"][0]["evidence"]["family"], "log");
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "preset:c2-failure"]);
    assert_eq!(v["verdict"], "fails");
    assert_eq!(chain_ids(&v)[0], "case-c2");
    assert_eq!(v["case"]["case"], "C2");

    let v = json(&["classify", "preset:symmetric-stable-1.5"]);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(chain_ids(&v)[..2], ["case-b", "kesten-integral"]);
    assert!(v["chain"][1]["evidence"]["value"].as_f64().unwrap() > 0.0);

    let text = String::from_utf8(levyhunt(&["classify", "preset:brownian", "--text"]).stdout).unwrap();
    assert!(text.starts_with("verdict: holds"));
    assert!(text.contains("Theorem 1(i)"));
}

#[test]
fn sum_examples() {
    let v = json(&["sum", "preset:brownian", "preset:compound-poisson"]);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(chain_ids(&v).last().unwrap(), "thm31");
    assert_eq!(v["chain"].as_array().unwrap().last().unwrap()["rule"], "Theorem 3.1");

    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let s1 = write("s1.json", r#"{"dim":1,"a":[0.3],"Q":[[1]],"levy_measure":{"components":[{"type":"atoms","atoms":[{"x":[2],"w":1}]}]}}"#);
    let s2 = write("s2.json", r#"{"dim":1,"a":[0],"Q":[[2]],"levy_measure":{"components":[{"type":"atoms","atoms":[{"x":[-1],"w":1}]}]}}"#);
    let v = json(&["sum", &s1, &s2]);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(chain_ids(&v).last().unwrap(), "thm32");

    let v = json(&["sum", "preset:type-alpha-beta-pair", "preset:type-alpha-beta-pair:partner", "--assert-h1"]);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(chain_ids(&v), ["asserted-h1", "density-gate", "pro312-i", "im-domination", "thm41"]);
    assert_eq!(v["chain"][0]["source"], "asserted");
}

#[test]
fn decompose_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("atoms.json");
    std::fs::write(
        &spec,
        r#"{"dim":1,"a":[0.1],"Q":[[0.5]],"levy_measure":{"components":[
            {"type":"stable_power","alpha":1.2,"c_plus":1,"c_minus":0.5,"cutoff":1},
            {"type":"atoms","atoms":[{"x":[0.5],"w":2},{"x":[3],"w":1}]}]}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let v = json(&["decompose", spec.to_str().unwrap(), "--method", "pro35", "--out-dir", out.to_str().unwrap()]);
    assert!(v["additivity_error"].as_f64().unwrap() <= 1e-9);
    // a' = 0.1 + 0.5 * 2
    assert_eq!(v["first"]["a"][0], 1.1);
    for f in ["first.json", "second.json"] {
        let p = out.join(f);
        let bytes = std::fs::read(&p).unwrap();
        let again = levyhunt(&["spec", p.to_str().unwrap()]);
        assert!(again.status.success());
        assert_eq!(again.stdout, bytes, "{f}");
    }

    let v = json(&["decompose", "preset:asymmetric-cauchy", "--method", "thm25", "--k", "1", "--delta", "0.5"]);
    assert!(v["additivity_error"].as_f64().unwrap() <= 1e-9);
    let out = levyhunt(&["decompose", "preset:symmetric-stable-1.0", "--method", "thm25", "--k", "0.5", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(4));
    let out = levyhunt(&["decompose", "preset:brownian", "--method", "thm25", "--k", "1", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reports_are_deterministic() {
    let args = ["classify", "preset:asymmetric-cauchy", "--threads", "2"];
    assert_eq!(levyhunt(&args).stdout, levyhunt(&args).stdout);
    let v = json(&["classify", "preset:brownian", "--zmax", "1e5", "--eps-min-exp", "30"]);
    assert_eq!(v["settings"]["zmax"], 1e5);
    assert_eq!(v["settings"]["eps_min_exp"], 30);
}

#[test]
fn catalog_listing() {
    let v = json(&["catalog", "list"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(names.len() >= 12 && names.contains(&"c2-failure"));
}
