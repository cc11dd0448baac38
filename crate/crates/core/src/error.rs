use thiserror::Error;

/// Failure classes shared by every module. `code()` is stable and is what
/// the CLI reports in its error JSON.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::NonConvergence(_) => "numeric-nonconvergence",
            Error::Budget(_) => "budget-exceeded",
            Error::Invariant(_) => "internal-invariant",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Validation(m) | Error::NonConvergence(m) | Error::Budget(m) | Error::Invariant(m) => m,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::Validation(format!($($arg)*)) };
}
pub(crate) use invalid;
