use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvxcomp")).args(args).current_dir(root()).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn abs_conjugate_from_problem_file() {
    let out = run(&["composite", "--problem", "problems/abs-as-max.json", "--query", "conjugate", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["certified"], true);
    let out = run(&["composite", "--problem", "problems/abs-as-max.json", "--p", "1.5"]);
    assert_eq!(json(&out)["value"], "+inf");
}

#[test]
fn missing_problem_exits_2() {
    let out = run(&["conjugate", "--problem", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schema_violation_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"functions\": {\"g\": {\"kind\": \"max\", \"dim\": 2}},\n  \"colour\": 1\n}\n").unwrap();
    let out = run(&["composite", "--problem", path.to_str().unwrap(), "--p", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn semantic_errors_point_into_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.json");
    let doc = r#"{"functions": {"g": {"kind": "max", "dim": 2}},
                  "map": {"kind": "linear", "matrix": [[1], [-1]]},
                  "cone": {"kind": "orthant", "n": 3}}"#;
    std::fs::write(&path, doc).unwrap();
    let out = run(&["composite", "--problem", path.to_str().unwrap(), "--p", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/cone"));
}

#[test]
fn unknown_example_and_subcommand_exit_2() {
    assert_eq!(run(&["composite", "--example", "no-such-example", "--p", "0"]).status.code(), Some(2));
    assert_eq!(run(&["transmogrify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
}

fn check_report_schema(report: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(root().join("crates/cli/schema/report.schema.json")).unwrap()).unwrap();
    let keys = |s: &Value| s["properties"].as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    let required = |s: &Value| s["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect::<Vec<_>>();
    let top = report.as_object().unwrap();
    for k in required(&schema) {
        assert!(top.contains_key(&k), "missing {k}");
    }
    for k in top.keys() {
        assert!(keys(&schema).contains(k), "unexpected {k}");
    }
    let item = &schema["properties"]["checks"]["items"];
    let statuses: Vec<&str> = item["properties"]["status"]["enum"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    for c in report["checks"].as_array().unwrap() {
        let c = c.as_object().unwrap();
        for k in required(item) {
            assert!(c.contains_key(&k), "check missing {k}");
        }
        for k in c.keys() {
            assert!(keys(item).contains(k), "check has unexpected {k}");
        }
        assert!(statuses.contains(&c["status"].as_str().unwrap()));
        assert!(c["measured"].is_number() || ["+inf", "-inf", "nan"].contains(&c["measured"].as_str().unwrap()));
    }
}

#[test]
fn verify_reports_round_trip_and_validate() {
    let out = run(&["verify", "--suite", "vgf", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    check_report_schema(&v);
    let typed: cvxcomp::verify::VerificationReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(typed.seed, 7);
    assert!(typed.checks.len() >= 12 && typed.all_passed());
    assert_eq!(serde_json::to_value(&typed).unwrap(), v);
}

#[test]
fn verify_is_reproducible_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify", "--suite", "spectral", "--seed", "3", "--threads", "2", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn matrix_subcommands() {
    let v = json(&run(&["vgf", "--example", "vgf-interval", "--x", "1"]));
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["conjugate"]["value"], 0.25);
    let v = json(&run(&["spectral", "--example", "spectral-max", "--x", "[[2,0],[0,1]]"]));
    assert_eq!(v["value"], 2.0);
    assert_eq!(v["subdifferential"]["exactness"], "exact");
    let v = json(&run(&["mff", "--example", "mff-identity"]));
    assert_eq!(v["gamma"], 0.5);
    let v = json(&run(&["mff", "--example", "mff-off-range"]));
    assert_eq!(v["gamma"], "+inf");
}

#[test]
fn conic_and_farkas_examples() {
    let v = json(&run(&["conic", "--example", "conic-linear", "--x", "1"]));
    assert_eq!(v["slater"], "held");
    assert_eq!(v["dual"]["value"], 1.0);
    assert_eq!(v["optimality"]["verdict"], "certified");
    let v = json(&run(&["farkas", "--example", "farkas-sign-fails"]));
    assert_eq!(v["verdict"], "a-fails");
    let v = json(&run(&["farkas", "--example", "farkas-sign-holds"]));
    assert_eq!(v["verdict"], "b-holds");
}

#[test]
fn single_function_operations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"space": {"kind": "real", "dim": 2}, "functions": {"f": {"kind": "abs-sum", "dim": 2}}}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&run(&["conjugate", "--problem", p, "--p", "0.5,-1"]));
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["bruteforce"]["value"], 0.0);
    let v = json(&run(&["subdiff", "--problem", p, "--x", "0,2"]));
    assert_eq!(v["subdifferential"]["exactness"], "exact");
    let out = run(&["conjugate", "--problem", p, "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
