use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A search finished without producing the requested object.
    #[error("not found: {0}")]
    NotFound(String),
    /// A configured budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A p-adic computation ran out of digits.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    /// Two q-expansions over different coefficient rings were combined.
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    /// Malformed cache or input files.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    /// A mathematical impossibility was observed. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

macro_rules! precondition {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::Error::Precondition(format!($($arg)+)));
        }
    };
}
pub(crate) use precondition;
