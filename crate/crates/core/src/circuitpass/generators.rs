use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, Op};
use crate::error::{Error, Result};
use crate::math::{FRAC_PI_2, PI, TAU};
use crate::qgates::{controlled_phase, haar_unitary, xxyy_interaction, zz_interaction, U3Params};
use crate::seed;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "benchmark circuits need at least 2 qubits, got {n}"
        )));
    }
    Ok(())
}

pub(crate) const HADAMARD: U3Params = U3Params::new(FRAC_PI_2, 0.0, PI);

/// `Rx(γ)` up to global phase.
pub(crate) fn rx(gamma: f64) -> U3Params {
    U3Params::new(gamma, -FRAC_PI_2, FRAC_PI_2)
}

/// Quantum-volume circuit: `n` layers, each pairing a random permutation of
/// the qubits and applying a Haar-random SU(4) to every pair.
pub fn gen_qv(n: usize, seed: u64) -> Result<Circuit> {
    check_n(n)?;
    let mut rng = seed::rng(seed);
    let mut c = Circuit::new(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..n {
        perm.shuffle(&mut rng);
        for pair in perm.chunks_exact(2) {
            let u = haar_unitary(4, &mut rng);
            c.push(Op::unitary(pair[0], pair[1], u))?;
        }
    }
    Ok(c)
}

/// QAOA-style circuit: a Hadamard layer, then `⌈n³/4⌉` ZZ interactions with
/// angles uniform in `[0, 2π)` on random pairs, each followed by X rotations
/// on its two qubits. Every angle is recorded in the op label.
pub fn gen_qaoa(n: usize, seed: u64) -> Result<Circuit> {
    check_n(n)?;
    let mut rng = seed::rng(seed);
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Op::U3 {
            q,
            params: HADAMARD,
        })?;
    }
    let count = (n * n * n).div_ceil(4);
    for _ in 0..count {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let beta: f64 = rng.random_range(0.0..TAU);
        let (ga, gb): (f64, f64) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        c.push(Op::labelled(
            a,
            b,
            zz_interaction(beta),
            format!("zz({beta})"),
        ))?;
        c.push(Op::U3 {
            q: a,
            params: rx(ga),
        })?;
        c.push(Op::U3 {
            q: b,
            params: rx(gb),
        })?;
    }
    Ok(c)
}

/// Quantum Fourier transform: a Hadamard on each qubit followed by the
/// controlled-phase ladder `CP(π/2^t)`, `n(n-1)/2` two-qubit ops in total.
pub fn gen_qft(n: usize) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(n);
    for j in 0..n {
        c.push(Op::U3 {
            q: j,
            params: HADAMARD,
        })?;
        for k in j + 1..n {
            let t = (k - j) as i32;
            let phi = PI / crate::math::powi(2.0, t);
            c.push(Op::labelled(
                k,
                j,
                controlled_phase(phi),
                format!("cp({t})"),
            ))?;
        }
    }
    Ok(c)
}

/// Fermi-Hubbard Trotter step on a 1-D chain: `2n` ZZ and `4n`
/// `(XX+YY)/2` interactions cycling over the chain's edges, angles uniform
/// in `[0, 2π)`.
pub fn gen_fh(n: usize, seed: u64) -> Result<Circuit> {
    check_n(n)?;
    let mut rng = seed::rng(seed);
    let mut c = Circuit::new(n);
    let edges = n - 1;
    for k in 0..2 * n {
        let q = k % edges;
        let beta: f64 = rng.random_range(0.0..TAU);
        c.push(Op::labelled(
            q,
            q + 1,
            zz_interaction(beta),
            format!("zz({beta})"),
        ))?;
    }
    for k in 0..4 * n {
        let q = k % edges;
        let beta: f64 = rng.random_range(0.0..TAU);
        c.push(Op::labelled(
            q,
            q + 1,
            xxyy_interaction(beta),
            format!("xxyy({beta})"),
        ))?;
    }
    Ok(c)
}
