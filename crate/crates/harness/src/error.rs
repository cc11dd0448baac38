use serde::Serialize;
use thiserror::Error;

/// CLI failure; `code()` follows the core taxonomy.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ipkit_core::Error),
    #[error("validation: {0}")]
    Validation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Validation(_) => "validation",
            CliError::Internal(_) => "internal-invariant",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "validation" => 2,
            "numeric-nonconvergence" => 3,
            "budget-exceeded" => 4,
            _ => 5,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            code: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let message = match self {
            CliError::Core(e) => e.message().to_string(),
            CliError::Validation(m) | CliError::Internal(m) => m.clone(),
        };
        serde_json::to_string(&Wrapper { error: Body { code: self.code(), message } }).unwrap_or_default()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io: {e}"))
    }
}
