use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error(transparent)]
    Core(#[from] ddchan_core::Error),

    #[error("{0}")]
    Sweep(String),

    #[error("{0}")]
    Csv(String),
}

impl HarnessError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            msg: err.to_string(),
        }
    }

    /// Short category for the `kind=` field of the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Config(_) => "config",
            HarnessError::Io { .. } => "io",
            HarnessError::Core(_) => "core",
            HarnessError::Sweep(_) => "sweep",
            HarnessError::Csv(_) => "csv",
        }
    }

    /// `error: kind=<kind> msg="<message>"` with quotes and backslashes escaped.
    pub fn error_line(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
        format!("error: kind={} msg=\"{}\"", self.kind(), msg)
    }
}
