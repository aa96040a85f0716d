use std::fmt;

/// CLI failures, each mapped to a fixed process exit code. No partial CSV
/// is ever written: commands assemble their full report before printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed file or invalid arguments (exit 2).
    Validation(String),
    /// Desk-scale envelope exceeded without --force (exit 3).
    Envelope(String),
    /// An internal invariant failed, signaling a numerical bug (exit 4).
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Envelope(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "error: {msg}"),
            CliError::Envelope(msg) => write!(f, "error: {msg}"),
            CliError::Invariant(msg) => write!(f, "internal invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<specrad::Error> for CliError {
    fn from(e: specrad::Error) -> Self {
        match e {
            specrad::Error::Inconsistency(msg) => CliError::Invariant(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}
