use thiserror::Error;

/// Errors produced by the numerical routines and file readers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is unusable: a sampler produced a non-finite value, a
    /// series is empty, and so on.
    #[error("data error: {0}")]
    Data(String),

    /// The time integrator produced a non-finite state.
    #[error("numerical divergence at step {step} (t = {t}): mode {mode} is not finite")]
    Divergence { step: usize, t: f64, mode: usize },

    /// An iterative routine failed to converge.
    #[error("internal error: {0}")]
    Internal(String),

    /// Malformed input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
