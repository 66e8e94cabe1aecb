// Fixed-size 2x2 / 4x4 complex kernels used on the optimizer's hot path.

use super::matrix::{Matrix, C64};

pub(crate) type M2 = [C64; 4];
pub(crate) type M4 = [C64; 16];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn ident4() -> M4 {
    let mut m = [ZERO; 16];
    m[0] = ONE;
    m[5] = ONE;
    m[10] = ONE;
    m[15] = ONE;
    m
}

#[inline]
pub(crate) fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [ZERO; 16];
    for r in 0..4 {
        for k in 0..4 {
            let x = a[r * 4 + k];
            out[r * 4] += x * b[k * 4];
            out[r * 4 + 1] += x * b[k * 4 + 1];
            out[r * 4 + 2] += x * b[k * 4 + 2];
            out[r * 4 + 3] += x * b[k * 4 + 3];
        }
    }
    out
}

/// `a† b`
#[inline]
pub(crate) fn adj_mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [ZERO; 16];
    for k in 0..4 {
        for r in 0..4 {
            let x = a[k * 4 + r].conj();
            out[r * 4] += x * b[k * 4];
            out[r * 4 + 1] += x * b[k * 4 + 1];
            out[r * 4 + 2] += x * b[k * 4 + 2];
            out[r * 4 + 3] += x * b[k * 4 + 3];
        }
    }
    out
}

/// `a b†`
#[inline]
pub(crate) fn mul_adj4(a: &M4, b: &M4) -> M4 {
    let mut out = [ZERO; 16];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = ZERO;
            for k in 0..4 {
                acc += a[r * 4 + k] * b[c * 4 + k].conj();
            }
            out[r * 4 + c] = acc;
        }
    }
    out
}

/// `Tr(a† b) = Σ conj(a_rc) b_rc`
#[inline]
pub(crate) fn inner4(a: &M4, b: &M4) -> C64 {
    let mut acc = ZERO;
    for i in 0..16 {
        acc += a[i].conj() * b[i];
    }
    acc
}

#[inline]
pub(crate) fn kron2(a: &M2, b: &M2) -> M4 {
    let mut out = [ZERO; 16];
    for ar in 0..2 {
        for ac in 0..2 {
            let x = a[ar * 2 + ac];
            for br in 0..2 {
                for bc in 0..2 {
                    out[(ar * 2 + br) * 4 + ac * 2 + bc] = x * b[br * 2 + bc];
                }
            }
        }
    }
    out
}

#[inline]
pub(crate) fn mul2(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Contracts the low-qubit indices of `m` against `b`:
/// `out[a][a'] = Σ_{b,b'} conj(B[b][b']) M[(a,b),(a',b')]`.
#[inline]
pub(crate) fn contract_low(m: &M4, b: &M2) -> M2 {
    let mut out = [ZERO; 4];
    for a in 0..2 {
        for ap in 0..2 {
            let mut acc = ZERO;
            for bb in 0..2 {
                for bp in 0..2 {
                    acc += b[bb * 2 + bp].conj() * m[(a * 2 + bb) * 4 + ap * 2 + bp];
                }
            }
            out[a * 2 + ap] = acc;
        }
    }
    out
}

/// Contracts the high-qubit indices of `m` against `a`.
#[inline]
pub(crate) fn contract_high(m: &M4, a: &M2) -> M2 {
    let mut out = [ZERO; 4];
    for bb in 0..2 {
        for bp in 0..2 {
            let mut acc = ZERO;
            for aa in 0..2 {
                for ap in 0..2 {
                    acc += a[aa * 2 + ap].conj() * m[(aa * 2 + bb) * 4 + ap * 2 + bp];
                }
            }
            out[bb * 2 + bp] = acc;
        }
    }
    out
}

/// `Σ conj(a_i) b_i` over 2x2 entries.
#[inline]
pub(crate) fn inner2(a: &M2, b: &M2) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2] + a[3].conj() * b[3]
}

pub(crate) fn to_m4(m: &Matrix) -> M4 {
    assert_eq!(m.dim(), 4);
    let mut out = [ZERO; 16];
    out.copy_from_slice(m.data());
    out
}

pub(crate) fn m4_to_matrix(m: &M4) -> Matrix {
    Matrix::from_vec(4, m.to_vec()).expect("16 entries")
}

pub(crate) fn m2_to_matrix(m: &M2) -> Matrix {
    Matrix::from_vec(2, m.to_vec()).expect("4 entries")
}
