use thiserror::Error;

/// Crate-wide error type. `exit_code` fixes the process exit status used by
/// the CLI: 2 for input that failed to parse, 3 for the degree cap, 4 for
/// numeric/domain trouble.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degree cap exceeded: total q/p degree {degree} > cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("series limit: {0}")]
    SeriesLimit(String),

    #[error("bad configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Json(_) | Error::Config(_) => 2,
            Error::DegreeCap { .. } => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
