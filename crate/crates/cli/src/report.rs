use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::ReportArgs;

/// A usage or input error; the process exits with status 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub parameters: Value,
    pub results: Value,
    pub outputs: Vec<String>,
    /// Human-readable lines printed when `--json` is absent.
    pub summary: Vec<String>,
    /// False when the input failed verification (exit status 1).
    pub verified: bool,
    /// Printed to stderr when verification fails.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn new(parameters: Value, results: Value) -> Self {
        Outcome {
            parameters,
            results,
            outputs: Vec::new(),
            summary: Vec::new(),
            verified: true,
            failure: None,
        }
    }
}

#[derive(Serialize)]
pub struct RunReport {
    subcommand: &'static str,
    parameters: Value,
    version: &'static str,
    outputs: Vec<String>,
    results: Value,
    wall_time_ms: u64,
}

/// JSON with object keys sorted at every level.
pub fn sorted_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    // serde_json's default map is ordered by key
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

impl RunReport {
    pub fn new(subcommand: &'static str, outcome: &Outcome, wall: Duration) -> Self {
        RunReport {
            subcommand,
            parameters: outcome.parameters.clone(),
            version: env!("CARGO_PKG_VERSION"),
            outputs: outcome.outputs.clone(),
            results: outcome.results.clone(),
            wall_time_ms: wall.as_millis() as u64,
        }
    }

    pub fn emit(&self, args: &ReportArgs, outcome: &Outcome) -> Result<(), Failure> {
        let text = sorted_json(self)?;
        if let Some(path) = &args.report {
            write_file(path, &text)?;
        }
        if args.json {
            print!("{text}");
        } else {
            for line in &outcome.summary {
                println!("{line}");
            }
        }
        if let Some(msg) = &outcome.failure {
            eprintln!("verification failed: {msg}");
        }
        Ok(())
    }
}
