//! Standard-library companion to `gatesynth-core`: a rayon-backed executor,
//! JSON/CSV file formats and the pieces of the `gatesynth` command-line tool.

pub mod cli;
mod error;
mod exec;
pub mod formats;

pub use error::{Error, Result};
pub use exec::RayonExecutor;
