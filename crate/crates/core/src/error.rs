use thiserror::Error;

use crate::connect::ConnectStage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} = {got} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("{divisor} does not divide {n}")]
    Divisibility { n: usize, divisor: usize },

    #[error("target unreachable: {0}")]
    Unreachable(String),

    #[error("no acceptable sample after {0} attempts")]
    RetryCapExceeded(usize),

    #[error("pair {pair}: no connection found ({stage})")]
    ConnectFailed { pair: usize, stage: ConnectStage },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameters(msg.into()))
}

/// Checks `1 <= ell` and `2 ell < k`.
pub(crate) fn check_loose(k: usize, ell: usize) -> Result<()> {
    if ell == 0 || 2 * ell >= k {
        return invalid(format!("need 1 <= ell < k/2, got k = {k}, ell = {ell}"));
    }
    Ok(())
}
