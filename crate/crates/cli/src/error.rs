use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(#[from] projfeat::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("suite file: {0}")]
    Suite(String),
    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 1 for usage errors, 2 for bad input data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Suite(_) => 1,
            CliError::Data(projfeat::Error::Config(_) | projfeat::Error::Argument(_)) => 1,
            CliError::Data(_) | CliError::Io { .. } | CliError::Output(_) => 2,
        }
    }
}
