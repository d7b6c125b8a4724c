use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Parse(String),

    #[error("config: invalid {field}: {reason}")]
    Config { field: String, reason: String },

    #[error("unknown preset {0:?}; run `chiral-cp presets list`")]
    UnknownPreset(String),

    #[error("{0}")]
    Core(#[from] chiral_cp::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for numerical failure, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Config { .. } | CliError::UnknownPreset(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Pool(_) => 1,
        }
    }
}
