//! Process-level error handling: every failure maps to an exit code and
//! a machine-readable JSON object on stderr.
//!
//! Exit codes: 0 success, 2 parameter/config error, 3 input parse error,
//! 4 numerical failure (non-convergence, degeneracy, overflow) or output
//! I/O failure.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn parameter(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            kind: "parameter",
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            kind: "parse",
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            kind: "numerical",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            kind: "io",
            message: message.into(),
        }
    }

    /// Default classification of library errors: domain/range problems
    /// are parameter errors; everything else is a numerical failure.
    /// Stages that know better (e.g. CSV-derived data) wrap explicitly.
    pub fn from_library(error: focusqed::Error) -> Self {
        use focusqed::Error::*;
        match &error {
            Domain(_) | OutOfRange(_) => CliError::parameter(error.to_string()),
            Overflow(_) | NoConvergence { .. } | DegenerateData(_) | FitNotConverged { .. } => {
                CliError::numerical(error.to_string())
            }
        }
    }

    /// Classification for errors raised while turning parsed file rows
    /// into normalized data: the file's contents are at fault.
    pub fn from_data(error: focusqed::Error) -> Self {
        CliError::parse(error.to_string())
    }

    /// The stderr JSON: {"error": {"code": …, "kind": …, "message": …}}.
    pub fn render(&self) -> String {
        #[derive(Serialize)]
        struct Envelope<'a> {
            error: &'a CliError,
        }
        serde_json::to_string(&Envelope { error: self })
            .unwrap_or_else(|_| format!("{{\"error\":{{\"code\":{},\"kind\":\"{}\",\"message\":\"unrenderable\"}}}}", self.code, self.kind))
    }
}
