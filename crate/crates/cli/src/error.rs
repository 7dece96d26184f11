use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("malformed config document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerics(#[from] swipt_secrecy::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// 2 for anything the caller got wrong, 1 for failures during evaluation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Json(_) | CliError::Usage(_) => 2,
            CliError::Numerics(_) | CliError::Io { .. } => 1,
        }
    }
}
