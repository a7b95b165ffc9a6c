//! Reports validate against the published schema. Validation runs through
//! Python's `jsonschema` package.

use std::path::Path;
use std::process::Command;

use selfsim_cli::corpus::all_entries;
use selfsim_cli::REPORT_SCHEMA;

const VALIDATOR: &str = r#"
import json, sys, jsonschema
schema = json.load(open(sys.argv[1]))
jsonschema.Draft202012Validator.check_schema(schema)
v = jsonschema.Draft202012Validator(schema)
bad = 0
for path in sys.argv[2:]:
    for e in v.iter_errors(json.load(open(path))):
        bad += 1
        print(path, list(e.absolute_path), e.message[:300])
sys.exit(1 if bad else 0)
"#;

fn analyze(dir: &Path, name: &str, args: &[&str], env_budget: Option<&str>) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_selfsim"));
    cmd.arg("analyze").args(args).env_remove("SELFSIM_BUDGET");
    if let Some(b) = env_budget {
        cmd.env("SELFSIM_BUDGET", b);
    }
    let out = cmd.output().unwrap();
    assert!(!out.stdout.is_empty(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    path.display().to_string()
}

fn validate(schema: &str, reports: &[String]) -> std::process::Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schema.json");
    std::fs::write(&path, schema).unwrap();
    Command::new("python3")
        .arg("-c")
        .arg(VALIDATOR)
        .arg(&path)
        .args(reports)
        .output()
        .expect("python3 with the jsonschema package is needed to validate reports")
}

#[test]
fn schema_is_published() {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).arg("schema").output().unwrap();
    assert_eq!(out.stdout, REPORT_SCHEMA.as_bytes());
    let v: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    assert_eq!(v["properties"]["schema_version"]["const"], 1);
}

#[test]
fn reports_validate() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports: Vec<String> = all_entries()
        .iter()
        .map(|e| analyze(dir.path(), &e.name.replace(':', "_"), &["--corpus", &e.name], None))
        .collect();
    reports.push(analyze(dir.path(), "sim", &["--corpus", "cantor", "--dim", "sim"], None));
    reports.push(analyze(
        dir.path(),
        "checked",
        &["--corpus", "gasket", "--levels", "2", "--check", "sosc", "--dim", "box"],
        None,
    ));
    reports.push(analyze(dir.path(), "budget", &["--corpus", "gasket", "--levels", "4"], Some("20")));
    let out = validate(REPORT_SCHEMA, &reports);
    assert!(out.status.success(), "{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));

    let mut broken: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&reports[1]).unwrap()).unwrap();
    broken["separation"]["osc"]["witness"] = serde_json::json!({"kind": "overlap"});
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken.to_string()).unwrap();
    let out = validate(REPORT_SCHEMA, &[path.display().to_string()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}
