use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Search outcomes such as "timed out" or "no strategy exists" are not
/// errors; they are reported through the verdict types of each module.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported graph mode: {0}")]
    UnsupportedMode(String),

    #[error("strategy does not match graph: {0}")]
    Mismatch(String),

    #[error("input strategy not reducible: {0}")]
    NotReducible(String),

    #[error("work budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
