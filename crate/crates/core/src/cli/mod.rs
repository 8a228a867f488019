//! Batch front end: problem files in, deterministic reports out.

mod problem;
mod replay;
mod report;
mod tasks;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

pub use problem::{
    digest, parse_tag, ChartDef, DivisorDef, FiltrationDef, IdealDef, InputError, MapDef, ModuleDef, PrismDef, Problem,
    ProblemFile, RingDef, SequenceDef, Settings, Task, TaskDef, TaskKind, TaskOptions, TowerDef, TowerMapDef,
    SCHEMA_VERSION,
};
pub use replay::{replay, ReplayOutcome};
pub use report::{Report, TaskReport, TaskStatus, TaskTiming, Timing, ENGINE, ENGINE_VERSION};
pub use tasks::run_problem;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TASK_ERROR: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "proreg", version, about = "Certify pro-zero towers, bounded torsion and pro-regular sequences")]
pub struct Args {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Default window for tasks that do not set one.
    #[arg(long, default_value_t = crate::towers::DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Default Gröbner degree cap for rings that do not set one.
    #[arg(long, default_value_t = crate::kernel::DEFAULT_DEGREE_CAP)]
    pub degree_cap: u32,
    /// Worker threads; never changes the report.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Re-verify the given report against the problem instead of running it.
    #[arg(long, value_name = "REPORT")]
    pub replay: Option<PathBuf>,
    /// Write the report here (timing goes to `<output>.timing.json`);
    /// stdout otherwise.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn timing_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".timing.json");
    PathBuf::from(s)
}

/// Runs the command line and returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    if args.window < 2 {
        eprintln!("--window: window must be at least 2");
        return EXIT_INPUT_ERROR;
    }
    let bytes = match fs::read(&args.problem) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{}: {e}", args.problem.display());
            return EXIT_INPUT_ERROR;
        }
    };
    let settings = Settings { window: args.window, degree_cap: args.degree_cap };
    let problem = match Problem::parse(&bytes, settings) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}: {e}", args.problem.display());
            return EXIT_INPUT_ERROR;
        }
    };
    if let Some(report_path) = &args.replay {
        return replay_command(report_path, &problem);
    }
    let (report, timing) = match run_problem(&problem, args.jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_TASK_ERROR;
        }
    };
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &args.output {
        Some(out) => {
            let timing_body = serde_json::to_string_pretty(&timing).expect("timing serializes") + "\n";
            if let Err(e) = fs::write(out, body).and_then(|_| fs::write(timing_path(out), timing_body)) {
                eprintln!("{}: {e}", out.display());
                return EXIT_TASK_ERROR;
            }
        }
        None => print!("{body}"),
    }
    for t in report.tasks.iter().filter(|t| t.status == TaskStatus::Error) {
        eprintln!("task {} ({}): {}", t.index, t.kind.name(), t.error.as_deref().unwrap_or(""));
    }
    if report.has_errors() {
        EXIT_TASK_ERROR
    } else {
        EXIT_OK
    }
}

fn replay_command(report_path: &Path, problem: &Problem) -> i32 {
    let report: Report = match fs::read(report_path).map_err(|e| e.to_string()).and_then(|b| {
        serde_json::from_slice(&b).map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))
    }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", report_path.display());
            return EXIT_INPUT_ERROR;
        }
    };
    match replay(&report, problem) {
        Ok(outcome) if outcome.ok() => {
            println!("replay ok: {} task(s) verified", outcome.tasks_checked);
            EXIT_OK
        }
        Ok(outcome) => {
            for f in &outcome.failures {
                println!("replay failed: {f}");
            }
            EXIT_TASK_ERROR
        }
        Err(e) => {
            println!("{e}");
            EXIT_TASK_ERROR
        }
    }
}
