use std::path::PathBuf;

/// Errors from file handling and the modules behind it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] gatesynth_core::Error),
    /// Reading an input file failed.
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Writing an output failed.
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed input; `context` locates the problem (field path, line).
    #[error("{context}: {message}")]
    Format { context: String, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Format {
            context: context.into(),
            message: message.to_string(),
        }
    }

    /// Process exit code: 2 bad input, 3 capacity exceeded, 4 missing
    /// calibration, 5 output I/O, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use gatesynth_core::Error as E;
        match self {
            Error::Read { .. } | Error::Format { .. } => 2,
            Error::Core(E::Parse(_) | E::InvalidArgument(_) | E::NotFound(_)) => 2,
            Error::Core(E::CapacityExceeded { .. }) => 3,
            Error::Core(E::MissingCalibration(_)) => 4,
            Error::Write { .. } | Error::Csv(_) => 5,
            Error::Core(_) => 1,
        }
    }
}
