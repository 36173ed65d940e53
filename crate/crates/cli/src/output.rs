//! JSON envelope and error classification.
//!
//! Keys come out sorted (serde_json's default map is ordered). Exact
//! quantities are JSON integers; floating-point values are decimal strings.

use qmc_core::QmcError;
use serde_json::{json, Value};

pub const SCHEMA: &str = "qmc/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Numerical,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    /// Stable tag for scripts, e.g. `invalid-partition`.
    pub tag: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Usage, tag: "usage", message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Usage => 2,
            ErrorKind::Numerical => 3,
        }
    }
}

impl From<QmcError> for CliError {
    fn from(e: QmcError) -> Self {
        let (kind, tag) = match &e {
            QmcError::InvalidPartition(_) => (ErrorKind::Usage, "invalid-partition"),
            QmcError::InvalidHeight(_) => (ErrorKind::Usage, "invalid-height"),
            QmcError::WeightMismatch(_) => (ErrorKind::Usage, "weight-mismatch"),
            QmcError::InvalidArgument(_) => (ErrorKind::Usage, "invalid-argument"),
            QmcError::CapExceeded(_) => (ErrorKind::Usage, "cap-exceeded"),
            QmcError::UnprovedRegime(_) => (ErrorKind::Usage, "unproved-regime"),
            QmcError::Io(_) => (ErrorKind::Usage, "io"),
            QmcError::Consistency(_) => (ErrorKind::Numerical, "consistency"),
            QmcError::NonTermination(_) => (ErrorKind::Numerical, "non-termination"),
            QmcError::Numerical(_) => (ErrorKind::Numerical, "numerical"),
        };
        CliError { kind, tag, message: e.to_string() }
    }
}

/// Successful command output before wrapping.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub exit_code: u8,
}

impl Outcome {
    pub fn new(inputs: Value, result: Value) -> Self {
        Outcome { inputs, result, exit_code: 0 }
    }
}

pub struct Envelope(Value);

impl Envelope {
    pub fn success(command: &str, inputs: Value, result: Value, runtime_ms: u64) -> Self {
        Envelope(json!({
            "schema": SCHEMA,
            "command": command,
            "inputs": inputs,
            "result": result,
            "runtime_ms": runtime_ms,
        }))
    }

    pub fn failure(command: &str, e: CliError, runtime_ms: u64) -> Self {
        Envelope(json!({
            "schema": SCHEMA,
            "command": command,
            "error": { "kind": e.tag, "message": e.message, "exit_code": e.exit_code() },
            "runtime_ms": runtime_ms,
        }))
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.0).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

/// Shortest decimal that round-trips.
pub fn float(x: f64) -> Value {
    Value::String(format!("{x:?}"))
}

/// Exact integer, as a JSON number when it fits in 64 bits.
pub fn big(x: impl ToString) -> Value {
    let s = x.to_string();
    if let Ok(v) = s.parse::<i64>() {
        Value::from(v)
    } else if let Ok(v) = s.parse::<u64>() {
        Value::from(v)
    } else {
        Value::String(s)
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}
