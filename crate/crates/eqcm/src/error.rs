use std::path::PathBuf;

pub type RunResult<T> = Result<T, RunError>;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not valid UTF-8")]
    NotUtf8 { path: PathBuf },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] eqcm_core::Error),

    #[error("{split} sample {index} ({word:?}): {source}")]
    Sample {
        split: &'static str,
        index: usize,
        word: String,
        #[source]
        source: eqcm_core::Error,
    },
}

impl RunError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Io { .. } => "io",
            RunError::NotUtf8 { .. } => "encoding",
            RunError::Config(_) => "config",
            RunError::Json(_) => "json",
            RunError::Csv(_) => "csv",
            RunError::Core(_) => "model",
            RunError::Sample { .. } => "sample",
        }
    }
}
