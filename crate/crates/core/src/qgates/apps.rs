use alloc::format;

use super::gates::{fsim_m4, swap_matrix};
use super::haar::haar_su4;
use super::matrix::{Matrix, Unitary, C64};
use super::small::m4_to_matrix;
use crate::error::{Error, Result};
use crate::math::{powi, PI};

/// Two-qubit operations drawn from the benchmark applications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppKind {
    /// Haar-random unitary (seed).
    Qv,
    /// exp(-iβ Z⊗Z) (angle).
    QaoaZz,
    /// Controlled phase diag(1, 1, 1, e^{iπ/2^t}) (power t ≥ 1).
    QftCp,
    /// exp(-iβ Z⊗Z) (angle).
    FhZz,
    /// exp(-iβ (X⊗X + Y⊗Y)/2) (angle).
    FhXxyy,
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AppParam {
    None,
    Seed(u64),
    Angle(f64),
    Power(u32),
}

pub fn app_unitary(kind: AppKind, param: AppParam) -> Result<Unitary> {
    let angle = |p: AppParam| match p {
        AppParam::Angle(b) if b.is_finite() => Ok(b),
        other => Err(Error::invalid(format!(
            "{kind:?} takes a finite angle, got {other:?}"
        ))),
    };
    match kind {
        AppKind::Qv => match param {
            AppParam::Seed(s) => Ok(haar_su4(s)),
            other => Err(Error::invalid(format!("QV takes a seed, got {other:?}"))),
        },
        AppKind::QaoaZz | AppKind::FhZz => Ok(zz_interaction(angle(param)?)),
        AppKind::FhXxyy => Ok(xxyy_interaction(angle(param)?)),
        AppKind::QftCp => match param {
            AppParam::Power(t) if t >= 1 => Ok(controlled_phase(PI / powi(2.0, t as i32))),
            other => Err(Error::invalid(format!(
                "QFT_CP takes an integer t >= 1, got {other:?}"
            ))),
        },
        AppKind::Swap => match param {
            AppParam::None => Ok(swap_matrix()),
            other => Err(Error::invalid(format!(
                "SWAP takes no parameter, got {other:?}"
            ))),
        },
    }
}

/// exp(-iβ Z⊗Z) = diag(e^{-iβ}, e^{iβ}, e^{iβ}, e^{-iβ}).
pub fn zz_interaction(beta: f64) -> Unitary {
    let m = Matrix::from_fn(4, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r == 0 || r == 3 {
            C64::from_polar(1.0, -beta)
        } else {
            C64::from_polar(1.0, beta)
        }
    });
    Unitary::from_matrix_unchecked(m)
}

/// exp(-iβ (X⊗X + Y⊗Y)/2). The generator is σx on span{|01⟩, |10⟩}, so the
/// exponential coincides with fSim(β, 0).
pub fn xxyy_interaction(beta: f64) -> Unitary {
    Unitary::from_matrix_unchecked(m4_to_matrix(&fsim_m4(beta, 0.0)))
}

/// diag(1, 1, 1, e^{iφ}).
pub fn controlled_phase(phi: f64) -> Unitary {
    let m = Matrix::from_fn(4, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r == 3 {
            C64::from_polar(1.0, phi)
        } else {
            C64::new(1.0, 0.0)
        }
    });
    Unitary::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qgates::{fsim_matrix, hs_fidelity};

    #[test]
    fn zero_angle_zz_is_identity() {
        let u = app_unitary(AppKind::QaoaZz, AppParam::Angle(0.0)).unwrap();
        assert!(u.matrix().max_abs_diff(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn qft_cp_one_is_diag_i() {
        let u = app_unitary(AppKind::QftCp, AppParam::Power(1)).unwrap();
        assert!((u.matrix().get(3, 3) - C64::new(0.0, 1.0)).norm() < 1e-15);
        for i in 0..3 {
            assert!((u.matrix().get(i, i) - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn xxyy_half_pi_is_iswap() {
        let u = app_unitary(AppKind::FhXxyy, AppParam::Angle(PI / 2.0)).unwrap();
        let iswap = fsim_matrix(PI / 2.0, 0.0).unwrap();
        assert!(hs_fidelity(&u, &iswap).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn wrong_parameter_types_are_rejected() {
        assert!(app_unitary(AppKind::Qv, AppParam::Angle(1.0)).is_err());
        assert!(app_unitary(AppKind::QftCp, AppParam::Power(0)).is_err());
        assert!(app_unitary(AppKind::FhZz, AppParam::Seed(1)).is_err());
        assert!(app_unitary(AppKind::Swap, AppParam::Angle(1.0)).is_err());
        assert!(app_unitary(AppKind::QaoaZz, AppParam::Angle(f64::NAN)).is_err());
    }
}
