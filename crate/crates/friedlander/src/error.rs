use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("|z| = {modulus} is outside the accuracy envelope |z| <= {limit}")]
    Envelope { modulus: f64, limit: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    Validation(String),

    #[error("{what} did not converge (error estimate {estimate:.3e})")]
    NonConvergence { what: String, estimate: f64 },

    #[error("grid under-resolves the {axis} axis: {detail}")]
    UnderResolved { axis: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn non_convergence(what: impl Into<String>, estimate: f64) -> Self {
        Error::NonConvergence { what: what.into(), estimate }
    }

    /// Process exit code for this error: 3 for numerical non-convergence,
    /// 2 for everything the caller could have fixed.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
