use std::path::PathBuf;

use exciton_qpt_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Malformed or invalid configuration or input file.
    #[error("{0}")]
    Config(String),

    /// The measurement cannot identify every process-matrix parameter.
    #[error("{0}")]
    Rank(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Numerical(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Rank(_) => 3,
            AppError::Io { .. } | AppError::Numerical(_) => 1,
        }
    }

    /// A new error with the same exit code and a different message.
    pub fn summarize(&self, message: String) -> Self {
        match self {
            AppError::Config(_) => AppError::Config(message),
            AppError::Rank(_) => AppError::Rank(message),
            AppError::Io { .. } | AppError::Numerical(_) => AppError::Numerical(message),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// Maps a core error raised while validating the given config section.
    pub fn from_core(section: &str, err: CoreError) -> Self {
        match err {
            CoreError::RankDeficient { .. } => AppError::Rank(err.to_string()),
            CoreError::NotConverged { .. } => AppError::Numerical(err.to_string()),
            other => AppError::Config(format!("{section}: {other}")),
        }
    }
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;
