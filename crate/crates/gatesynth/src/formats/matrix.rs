use gatesynth_core::{Matrix, Unitary, C64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major complex matrix as nested `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson(
            (0..m.dim())
                .map(|r| {
                    (0..m.dim())
                        .map(|c| [m.get(r, c).re, m.get(r, c).im])
                        .collect()
                })
                .collect(),
        )
    }
}

impl MatrixJson {
    pub fn to_matrix(&self, context: &str) -> Result<Matrix> {
        let dim = self.0.len();
        if let Some(r) = self.0.iter().position(|row| row.len() != dim) {
            return Err(Error::format(
                context,
                format!("row {r} has {} entries, expected {dim}", self.0[r].len()),
            ));
        }
        let data = self
            .0
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        Matrix::from_vec(dim, data).map_err(|e| Error::format(context, e))
    }

    pub fn to_unitary(&self, context: &str) -> Result<Unitary> {
        Unitary::new(self.to_matrix(context)?).map_err(|e| Error::format(context, e))
    }
}

/// Parses a standalone unitary file.
pub fn matrix_from_json(text: &str) -> Result<Unitary> {
    let m: MatrixJson = super::from_json(text, "matrix")?;
    m.to_unitary("matrix")
}
