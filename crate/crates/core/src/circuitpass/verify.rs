use alloc::format;

use super::{Circuit, Op};
use crate::error::{Error, Result};
use crate::qgates::small::{to_m4, M2, M4};
use crate::qgates::{Matrix, C64};

/// Largest register whose full unitary is built for verification.
pub const MAX_VERIFY_QUBITS: usize = 12;

fn apply_1q(u: &mut Matrix, n: usize, q: usize, g: &M2) {
    let dim = u.dim();
    let bit = 1usize << (n - 1 - q);
    let data = u.data_mut();
    for r0 in (0..dim).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        for col in 0..dim {
            let (x0, x1) = (data[r0 * dim + col], data[r1 * dim + col]);
            data[r0 * dim + col] = g[0] * x0 + g[1] * x1;
            data[r1 * dim + col] = g[2] * x0 + g[3] * x1;
        }
    }
}

fn apply_2q(u: &mut Matrix, n: usize, a: usize, b: usize, g: &M4) {
    let dim = u.dim();
    let (ba, bb) = (1usize << (n - 1 - a), 1usize << (n - 1 - b));
    let data = u.data_mut();
    for base in (0..dim).filter(|r| r & (ba | bb) == 0) {
        let rows = [base, base | bb, base | ba, base | ba | bb];
        for col in 0..dim {
            let x = rows.map(|r| data[r * dim + col]);
            for (i, &r) in rows.iter().enumerate() {
                data[r * dim + col] = g[4 * i] * x[0]
                    + g[4 * i + 1] * x[1]
                    + g[4 * i + 2] * x[2]
                    + g[4 * i + 3] * x[3];
            }
        }
    }
}

/// Full `2^n × 2^n` unitary of a circuit, qubit 0 most significant.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix> {
    let n = c.qubit_count();
    if n > MAX_VERIFY_QUBITS {
        return Err(Error::CapacityExceeded {
            message: format!("{n} qubits exceeds the verification limit of {MAX_VERIFY_QUBITS}"),
            best: None,
        });
    }
    let mut u = Matrix::identity(1 << n);
    for op in c.ops() {
        match op {
            Op::U3 { q, params } => apply_1q(&mut u, n, *q, &params.m2()),
            Op::Unitary2q { a, b, matrix, .. } => {
                apply_2q(&mut u, n, *a, *b, &to_m4(matrix.matrix()))
            }
            Op::Gate2q { a, b, gate } => apply_2q(&mut u, n, *a, *b, &gate.m4()),
        }
    }
    Ok(u)
}

/// `|Tr(U_c† U_o)| / 2^n` between the unitaries of two circuits.
pub fn verify_circuit(original: &Circuit, compiled: &Circuit) -> Result<f64> {
    if original.qubit_count() != compiled.qubit_count() {
        return Err(Error::invalid(format!(
            "qubit counts differ: {} vs {}",
            original.qubit_count(),
            compiled.qubit_count()
        )));
    }
    let uo = circuit_unitary(original)?;
    let uc = circuit_unitary(compiled)?;
    let tr: C64 = uc
        .data()
        .iter()
        .zip(uo.data())
        .map(|(c, o)| c.conj() * o)
        .sum();
    Ok((tr.norm() / uo.dim() as f64).min(1.0))
}
