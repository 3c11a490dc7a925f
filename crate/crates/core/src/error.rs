use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped so that the CLI can map them onto exit codes:
/// argument and input problems exit with 2, numeric failures with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty shift: {0}")]
    EmptyShift(String),

    #[error("matrix is reducible: {0}")]
    Reducible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unsupported dimension m = {0}: explicit hulls need m <= 3")]
    UnsupportedDimension(usize),

    #[error("graph has no cycle")]
    NoCycle,

    #[error("point is outside the domain: {0}")]
    OutOfDomain(String),

    #[error("degenerate face: {0}")]
    DegenerateFace(String),

    #[error("exponential weights underflow at t = {t}; use the exact zero-temperature path")]
    Underflow { t: f64 },

    #[error("numeric failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            residual,
        }
    }

    /// True for failures of the numerical routines (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric { .. } | Error::Underflow { .. } | Error::NoCycle | Error::ResourceLimit(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
