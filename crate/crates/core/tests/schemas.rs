//! The published schemas stay in step with the serde types.

use proreg::cli::{TaskKind, TaskStatus, SCHEMA_VERSION};
use serde_json::Value;

fn schema(name: &str) -> Value {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn task_kinds_match() {
    let problem = schema("problem.schema.json");
    let report = schema("report.schema.json");
    let kinds = strings(&problem["$defs"]["task"]["properties"]["kind"]["enum"]);
    assert_eq!(kinds, strings(&report["properties"]["tasks"]["items"]["properties"]["kind"]["enum"]));
    assert_eq!(kinds.len(), 16);
    for k in &kinds {
        let kind: TaskKind = serde_json::from_value(Value::String(k.clone())).unwrap();
        assert_eq!(kind.name(), k);
    }
}

#[test]
fn statuses_and_versions_match() {
    let problem = schema("problem.schema.json");
    let report = schema("report.schema.json");
    assert_eq!(problem["properties"]["schema_version"]["const"], SCHEMA_VERSION);
    assert_eq!(report["properties"]["schema_version"]["const"], SCHEMA_VERSION);
    let statuses = strings(&report["properties"]["tasks"]["items"]["properties"]["status"]["enum"]);
    for s in statuses {
        let status: TaskStatus = serde_json::from_value(Value::String(s.clone())).unwrap();
        assert_eq!(serde_json::to_value(status).unwrap(), Value::String(s));
    }
}
