use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use specwalk_core::Error;

pub const SCHEMA: &str = "specwalk/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::ConvergenceFailure { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub kind: &'static str,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Top-level JSON document written by every subcommand.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Value>,
    pub result: Value,
    pub timing: Timing,
}

impl ReportDocument {
    pub fn new(command: &'static str, inputs: Vec<InputInfo>, started: Instant) -> Self {
        ReportDocument {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            pairs: Vec::new(),
            certificates: Vec::new(),
            result: Value::Null,
            timing: Timing {
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            },
        }
    }

    /// Writes to `path`, or to stdout when `path` is `-`.
    pub fn write(&self, path: &str) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        if path == "-" {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        } else {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))
        }
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}
