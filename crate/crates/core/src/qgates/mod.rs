//! Complex linear algebra, gate constructors, fidelity metrics and unitary
//! ensembles.

mod apps;
pub(crate) mod gates;
mod haar;
mod matrix;
pub(crate) mod small;

pub use apps::{
    app_unitary, controlled_phase, xxyy_interaction, zz_interaction, AppKind, AppParam,
};
pub use gates::{
    canonicalize_fsim, fsim_matrix, swap_matrix, u3_from_matrix, u3_matrix, GateKind, U3Params,
};
pub use haar::{haar_su4, haar_unitary};
pub use matrix::{Matrix, Unitary, C64, UNITARITY_TOL};

use crate::error::{Error, Result};

/// Phase-insensitive Hilbert-Schmidt overlap `|Tr(U_d† U_t)| / dim`.
///
/// Equals 1 exactly when the two unitaries agree up to a global phase.
pub fn hs_fidelity(u_d: &Unitary, u_t: &Unitary) -> Result<f64> {
    hs_overlap(u_d.matrix(), u_t.matrix())
}

/// [`hs_fidelity`] for plain matrices.
pub fn hs_overlap(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(alloc::format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let tr: C64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(tr.norm() / a.dim() as f64)
}
