//! Shipped problem files and emitted reports conform to the schemas in docs/.

use std::path::{Path, PathBuf};

use jsonschema::JSONSchema;
use serde_json::Value;

use morse_index::harness::{self, parse_problem, Backend, Campaign, FuzzConfig, RunOptions};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn compile(name: &str) -> JSONSchema {
    JSONSchema::compile(&load(&root().join("docs").join(name))).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, doc: &Value, what: &str) {
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what} does not match the schema:\n{}", msgs.join("\n"));
    }
}

fn problem_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("problems"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files
}

#[test]
fn shipped_problems_match_problem_schema() {
    let schema = compile("problem.schema.json");
    for path in problem_files() {
        assert_valid(&schema, &load(&path), &path.display().to_string());
    }
}

#[test]
fn parsed_echo_matches_problem_schema() {
    let schema = compile("problem.schema.json");
    for path in problem_files() {
        let problem = parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(
            &schema,
            &serde_json::to_value(&problem).unwrap(),
            &path.display().to_string(),
        );
    }
}

#[test]
fn schema_rejects_what_the_parser_rejects() {
    let schema = compile("problem.schema.json");
    let bad = [
        r#"{"kind":"abstract","dim":2}"#,
        r#"{"kind":"abstract","dim":1,"form":[[1]],"backend":"quad"}"#,
        r#"{"kind":"pde","domain":{"a":0,"b":1,"n_elements":0},"p":{"constant":0},"q_a":1,"q_b":1}"#,
        r#"{"kind":"pde","domain":{"a":0,"b":1,"n_elements":4},"p":{"constant":0,"nodal":[1]},"q_a":1,"q_b":1}"#,
        r#"{"kind":"abstract","dim":1,"form":[["x"]]}"#,
    ];
    for doc in bad {
        let value: Value = serde_json::from_str(doc).unwrap();
        assert!(!schema.is_valid(&value), "schema accepted {doc}");
        assert!(parse_problem(doc).is_err(), "parser accepted {doc}");
    }
}

#[test]
fn reports_match_report_schema() {
    let schema = compile("report.schema.json");
    for path in problem_files() {
        let problem = parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let report = harness::run(&problem, RunOptions { timing: true });
        assert_valid(
            &schema,
            &serde_json::to_value(&report).unwrap(),
            &path.display().to_string(),
        );
    }
    for (backend, campaign) in [(Backend::Exact, Campaign::Single), (Backend::Float, Campaign::Multi)] {
        let report = harness::run_fuzz(&FuzzConfig::new(11, 40, 6, backend, campaign), RunOptions::default());
        assert_valid(&schema, &serde_json::to_value(&report).unwrap(), "fuzz report");
    }
}

#[test]
fn failure_dumps_match_report_schema() {
    // an absurd residual tolerance makes every out-of-range trial look solvable
    let schema = compile("report.schema.json");
    let mut config = FuzzConfig::new(5, 12, 5, Backend::Float, Campaign::Single);
    config.tolerances.residual = 1e6;
    let report = harness::run_fuzz(&config, RunOptions::default());
    let fuzz = report.fuzz.as_ref().unwrap();
    assert!(!fuzz.dumps.is_empty());
    assert_valid(
        &schema,
        &serde_json::to_value(&report).unwrap(),
        "fuzz report with dumps",
    );
}
