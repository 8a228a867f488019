//! Runs a problem file in memory, prints the report and replays it.

use proreg::cli::{replay, run_problem, Problem, Settings};

const PROBLEM: &str = r#"{
  "schema_version": 1,
  "rings": { "R": { "domain": "QQ", "variables": ["x", "y"], "relations": ["x*y"] } },
  "modules": { "M": { "ring": "R" } },
  "sequences": { "x": { "ring": "R", "elements": ["x"] } },
  "tasks": [
    { "kind": "bounded_torsion", "subjects": { "module": "M" }, "options": { "element": "x" } },
    { "kind": "pro_regular", "subjects": { "sequence": "x", "module": "M" } }
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Problem::parse(PROBLEM.as_bytes(), Settings { window: 8, degree_cap: 24 })?;
    let (report, _timing) = run_problem(&problem, 2)?;
    print!("{}", report.to_text());
    let outcome = replay(&report, &problem)?;
    println!("replay: {} task(s), {} failure(s)", outcome.tasks_checked, outcome.failures.len());
    Ok(())
}
