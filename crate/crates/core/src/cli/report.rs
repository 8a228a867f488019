use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::problem::{TaskKind, SCHEMA_VERSION};

pub const ENGINE: &str = "proreg";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TaskStatus {
    Ok,
    CapExceeded,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: TaskKind,
    pub subjects: BTreeMap<String, String>,
    pub window: usize,
    pub status: TaskStatus,
    pub verdict: String,
    #[serde(default)]
    pub details: Value,
    #[serde(default)]
    pub certificate: Value,
    #[serde(default)]
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The canonical report body. It carries no timing information, so
/// identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine: String,
    pub engine_version: String,
    pub schema_version: u32,
    pub problem_sha256: String,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn new(problem_sha256: String, tasks: Vec<TaskReport>) -> Self {
        Report {
            engine: ENGINE.into(),
            engine_version: ENGINE_VERSION.into(),
            schema_version: SCHEMA_VERSION,
            problem_sha256,
            tasks,
        }
    }

    pub fn has_errors(&self) -> bool {
        self.tasks.iter().any(|t| t.status == TaskStatus::Error)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} (problem {})", self.engine, self.engine_version, &self.problem_sha256[..12.min(self.problem_sha256.len())]);
        for t in &self.tasks {
            let subjects: Vec<String> = t.subjects.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let label = t.id.as_deref().map(|i| format!(" {i}")).unwrap_or_default();
            let _ = writeln!(s, "[{}]{label} {} ({}) window {}: {}", t.index, t.kind.name(), subjects.join(", "), t.window, t.verdict);
            if let Some(e) = &t.error {
                let _ = writeln!(s, "    error: {e}");
            }
            if let Value::Object(map) = &t.details {
                for (k, v) in map {
                    let _ = writeln!(s, "    {k}: {}", compact(v));
                }
            }
            for d in &t.diagnostics {
                let _ = writeln!(s, "    note: {d}");
            }
        }
        s
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Per-task wall-clock times, written beside the report and never inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub problem_sha256: String,
    pub jobs: usize,
    pub tasks: Vec<TaskTiming>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskTiming {
    pub index: usize,
    pub millis: u128,
}
