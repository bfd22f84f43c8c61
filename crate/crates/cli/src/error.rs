use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: warpwatch_core::Error },
    #[error(transparent)]
    Core(#[from] warpwatch_core::Error),
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("encoder failed: {0}")]
    Encoder(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn input(path: &Path, source: impl Into<warpwatch_core::Error>) -> Self {
        CliError::Input { path: path.to_path_buf(), source: source.into() }
    }

    /// 1 for anything wrong with the request, 2 when the filesystem or an
    /// external process let us down.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Encoder(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}
