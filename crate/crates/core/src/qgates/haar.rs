use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{Matrix, Unitary, C64};
use crate::math::sqrt;
use crate::seed;

/// Haar-random 4x4 unitary, deterministic in `seed`.
pub fn haar_su4(seed: u64) -> Unitary {
    haar_unitary(4, &mut seed::rng(seed))
}

/// Haar-random `dim x dim` unitary: QR of a complex Ginibre matrix with the
/// columns of Q rephased by the phases of R's diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Unitary {
    let scale = 1.0 / core::f64::consts::SQRT_2;
    let data: Vec<C64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * scale, im * scale)
        })
        .collect();
    let g = Matrix::from_vec(dim, data).expect("dim*dim entries");
    let (mut q, r) = householder_qr(&g);
    for c in 0..dim {
        let d = r.get(c, c);
        let n = d.norm();
        let ph = if n > 0.0 { d / n } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            let v = q.get(row, c) * ph;
            q.set(row, c, v);
        }
    }
    Unitary::from_matrix_unchecked(q)
}

/// Householder QR of a square complex matrix. Returns `(Q, R)` with `A = QR`.
pub(crate) fn householder_qr(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    let mut v = alloc::vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let norm_x = sqrt((k..n).map(|i| r.get(i, k).norm_sqr()).sum::<f64>());
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r.get(k, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        for i in 0..n {
            v[i] = if i < k {
                C64::new(0.0, 0.0)
            } else {
                r.get(i, k)
            };
        }
        v[k] -= alpha;
        let vnorm = sqrt(v[k..].iter().map(|z| z.norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for z in v[k..].iter_mut() {
            *z /= vnorm;
        }
        // R <- (I - 2 v v†) R
        for c in 0..n {
            let dot: C64 = (k..n).map(|i| v[i].conj() * r.get(i, c)).sum();
            for i in k..n {
                let val = r.get(i, c) - v[i] * dot * 2.0;
                r.set(i, c, val);
            }
        }
        // Q <- Q (I - 2 v v†)
        for row in 0..n {
            let dot: C64 = (k..n).map(|i| q.get(row, i) * v[i]).sum();
            for i in k..n {
                let val = q.get(row, i) - dot * v[i].conj() * 2.0;
                q.set(row, i, val);
            }
        }
    }
    (q, r)
}
