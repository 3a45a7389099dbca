use std::fmt::Display;
use std::io::Write;

use racg_core::verify::Verdict;
use racg_core::Error;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Common, Format};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidGraph(_)
            | Error::Reducible
            | Error::Singular(_)
            | Error::NearExceptional { .. }
            | Error::SignatureMismatch(..)
            | Error::Construction(_)
            | Error::ColoringViolation(..)
            | Error::LightlikeNormal(_)
            | Error::WallsIntersect(..) => EXIT_CONFIG,
            Error::Numerical(_)
            | Error::NoConvergence(_)
            | Error::ReductionBudget(_)
            | Error::NotTimelike
            | Error::NotSpacelike
            | Error::NotCollinear
            | Error::OrbitTooSmall(_)
            | Error::SphereTooLarge { .. } => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced, before formatting.
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub warnings: Vec<String>,
    pub result: Value,
    pub verdict: Verdict,
    pub csv: Option<String>,
    pub svg: Option<String>,
    /// Write `result` alone, without the report envelope.
    pub raw: bool,
}

impl Outcome {
    pub fn new(command: &'static str, config: Value, result: Value, verdict: Verdict) -> Self {
        Self {
            command,
            config,
            warnings: Vec::new(),
            result,
            verdict,
            csv: None,
            svg: None,
            raw: false,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    version: &'a str,
    version_hash: String,
    config: &'a Value,
    warnings: &'a [String],
    result: &'a Value,
    verdict: Verdict,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Value, Failure> {
    serde_json::to_value(value).map_err(|e| Failure {
        code: EXIT_NUMERICAL,
        message: format!("serialization: {e}"),
    })
}

/// Formats the outcome, writes it, and returns the exit code.
pub fn emit(common: &Common, out: Outcome) -> Result<u8, Failure> {
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let unavailable = |what: &str| {
        Failure::config(format!(
            "{what} output is not available for `{}`",
            out.command
        ))
    };
    let mut text = match common.format {
        Format::Json if out.raw => pretty(&out.result)?,
        Format::Json => pretty(&Envelope {
            schema: SCHEMA,
            command: out.command,
            version: racg_core::VERSION,
            version_hash: racg_core::version_hash(),
            config: &out.config,
            warnings: &out.warnings,
            result: &out.result,
            verdict: out.verdict,
        })?,
        Format::Csv => out.csv.clone().ok_or_else(|| unavailable("csv"))?,
        Format::Svg => out.svg.clone().ok_or_else(|| unavailable("svg"))?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::config(format!("writing {path}: {e}")))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Failure::config(format!("writing stdout: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(if out.verdict.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: EXIT_NUMERICAL,
        message: format!("serialization: {e}"),
    })
}
