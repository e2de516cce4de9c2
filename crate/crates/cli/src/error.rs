use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}, line {line}: {msg}")]
    Parse { what: &'static str, line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] matchest_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{failed} of {total} gap checks failed")]
    GapFailure { failed: usize, total: usize },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 1 for failed checks, 2 for everything that stems from bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GapFailure { .. } => 1,
            _ => 2,
        }
    }
}
