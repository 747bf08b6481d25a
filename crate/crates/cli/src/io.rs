use std::fs;
use std::io::Write;
use std::path::Path;

use comeq::rational::{self, Rational};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Exit codes: 1 for malformed input, 2 for a mathematical rejection.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            kind: "validation",
            message: message.into(),
        }
    }

    pub fn math(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            kind: "rejected",
            message: message.into(),
        }
    }
}

impl From<comeq::Error> for CliError {
    fn from(e: comeq::Error) -> Self {
        if e.is_validation() {
            CliError::validation(e.to_string())
        } else {
            CliError::math(e.to_string())
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation(format!("serialization failed: {e}")))?;
    emit(&text);
    Ok(())
}

/// Writes a line to stdout; a closed pipe ends the process quietly.
pub fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("comeq: write failed: {e}");
        std::process::exit(1);
    }
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Scalar {
    Str(String),
    Int(i64),
}

/// A JSON list of rationals given as strings or integers.
pub fn read_spectrum(path: &Path) -> Result<Vec<Rational>, CliError> {
    let raw: Vec<Scalar> = read_json(path)?;
    raw.into_iter()
        .map(|s| match s {
            Scalar::Str(s) => rational::parse(&s).map_err(CliError::from),
            Scalar::Int(n) => Ok(rational::int(n)),
        })
        .collect()
}
