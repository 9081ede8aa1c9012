use std::path::{Path, PathBuf};

/// Failure while reading or writing a file, or inside the codec.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format {
        path: PathBuf,
        #[source]
        source: lwfc_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Params {
        path: PathBuf,
        #[source]
        source: ParamError,
    },
    #[error(transparent)]
    Core(#[from] lwfc_core::Error),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn format(path: &Path, source: lwfc_core::Error) -> Self {
        Self::Format {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Problem in a key=value parameter block.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("line {line}: expected `key=value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: unknown key `{key}`")]
    Unknown { line: usize, key: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: cannot parse `{value}`")]
    Value { key: &'static str, value: String },
    #[error(transparent)]
    Invalid(#[from] lwfc_core::Error),
}
