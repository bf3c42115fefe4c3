use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;
use vigil_core::stream_io::CsvReadError;
use vigil_core::{ConfigError, SessionError, StreamError};

/// Failures mapped onto the exit-status taxonomy:
/// 2 = bad arguments, 3 = unreadable or malformed input, 4 = I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{path}: no such input")]
    NoSuchInput { path: PathBuf },
    #[error("{context}: {reason}")]
    Input { context: String, reason: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::NoSuchInput { .. } | CliError::Input { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(context: impl std::fmt::Display, source: io::Error) -> Self {
        CliError::Io {
            context: context.to_string(),
            source,
        }
    }

    pub fn input(context: impl std::fmt::Display, reason: impl std::fmt::Display) -> Self {
        CliError::Input {
            context: context.to_string(),
            reason: reason.to_string(),
        }
    }

    /// Opening an input file: a missing file is an input error, anything else I/O.
    pub fn open(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            CliError::NoSuchInput {
                path: path.to_path_buf(),
            }
        } else {
            CliError::io(path.display(), source)
        }
    }

    pub fn stream(context: impl std::fmt::Display, e: StreamError) -> Self {
        match e {
            StreamError::Io(source) => CliError::io(context, source),
            other => CliError::input(context, other),
        }
    }

    pub fn session(context: impl std::fmt::Display, e: SessionError) -> Self {
        match e {
            SessionError::Config(c) => CliError::Config(c),
            SessionError::Stream(s) => CliError::stream(context, s),
            other => CliError::input(context, other),
        }
    }

    pub fn csv(context: impl std::fmt::Display, e: CsvReadError) -> Self {
        match e {
            CsvReadError::Io(source) => CliError::io(context, source),
            other => CliError::input(context, other),
        }
    }
}
