//! JSON and CSV representations of the core types.

mod circuit;
mod decomposition;
mod device;
mod matrix;
mod reports;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use circuit::{circuit_from_json, circuit_to_json, CircuitFile, OpFile};
pub use decomposition::{
    decomposition_from_json, decomposition_to_json, DecompositionFile, GateFile,
};
pub use device::{device_from_json, device_to_json, DeviceFile, EdgeFile};
pub use matrix::{matrix_from_json, MatrixJson};
pub use reports::{
    calibration_from_json, calibration_to_json, compile_report_csv, compile_report_file, sweep_csv,
    sweep_file, tradeoff_csv, tradeoff_file, Bounded, CalibrationFile, CellRow, CompileReportFile,
    GateRow, SweepFile, TradeoffRowFile,
};

use crate::error::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Deserializes `text`, reporting the field path and line of any error.
pub fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::format(format!("{what} field `{path}`"), e.into_inner())
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
