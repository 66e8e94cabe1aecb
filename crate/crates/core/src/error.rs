use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::decomp::Decomposition;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidArgument(String),
    /// A size limit was hit. Layer searches that ran out of layers carry the
    /// best decomposition they found.
    CapacityExceeded {
        message: String,
        best: Option<Box<Decomposition>>,
    },
    /// A named registry entry does not exist.
    NotFound(String),
    /// A two-qubit operation was placed on a qubit pair that is not coupled.
    Connectivity(String),
    /// A gate kind has no fidelity data on the edge where it is needed.
    MissingCalibration(String),
    /// Malformed textual input.
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// The best decomposition attached to a capacity error, if any.
    pub fn best_decomposition(&self) -> Option<&Decomposition> {
        match self {
            Error::CapacityExceeded { best, .. } => best.as_deref(),
            _ => None,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::CapacityExceeded { message, best } => {
                write!(f, "capacity exceeded: {message}")?;
                if let Some(best) = best {
                    write!(
                        f,
                        " (best found: {} layers, infidelity {:.3e})",
                        best.layers(),
                        1.0 - best.f_d
                    )?;
                }
                Ok(())
            }
            Error::NotFound(m) => write!(f, "not found: {m}"),
            Error::Connectivity(m) => write!(f, "connectivity error: {m}"),
            Error::MissingCalibration(m) => write!(f, "missing calibration: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
