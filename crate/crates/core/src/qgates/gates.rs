use alloc::format;
use core::fmt;
use core::str::FromStr;

use super::matrix::{Matrix, Unitary, C64};
use super::small::{m2_to_matrix, m4_to_matrix, M2, M4, ONE, ZERO};
use crate::error::{Error, Result};
use crate::math::{atan2, cos, sin, wrap, FRAC_PI_2, PI, TAU};

/// A two-qubit hardware gate type: a point of the fSim family or one of its
/// named members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    FSim {
        theta: f64,
        phi: f64,
    },
    /// fSim(0, π)
    Cz,
    /// fSim(π/2, π/6)
    Syc,
    /// fSim(π/4, 0)
    SqrtIswap,
    /// fSim(π/2, 0)
    Iswap,
    /// The SWAP permutation, locally equivalent to fSim(π/2, π).
    Swap,
    /// XY(θ) = fSim(θ/2, 0)
    Xy(f64),
    /// CZ(φ) = fSim(0, φ)
    CPhase(f64),
}

impl GateKind {
    /// The fSim parameters this gate resolves to.
    pub fn fsim_params(&self) -> (f64, f64) {
        match *self {
            GateKind::FSim { theta, phi } => (theta, phi),
            GateKind::Cz => (0.0, PI),
            GateKind::Syc => (FRAC_PI_2, PI / 6.0),
            GateKind::SqrtIswap => (PI / 4.0, 0.0),
            GateKind::Iswap => (FRAC_PI_2, 0.0),
            GateKind::Swap => (FRAC_PI_2, PI),
            GateKind::Xy(theta) => (theta / 2.0, 0.0),
            GateKind::CPhase(phi) => (0.0, phi),
        }
    }

    /// Resolved parameters folded into `[0, π/2] × [0, π]`.
    pub fn canonical(&self) -> (f64, f64) {
        let (t, p) = self.fsim_params();
        canonicalize_fsim(t, p)
    }

    pub fn is_swap(&self) -> bool {
        matches!(self, GateKind::Swap)
    }

    /// Replaces named aliases by their explicit fSim form. SWAP stays SWAP
    /// since its matrix is not a member of the family.
    pub fn resolve(&self) -> GateKind {
        match self {
            GateKind::Swap => GateKind::Swap,
            g => {
                let (theta, phi) = g.fsim_params();
                GateKind::FSim { theta, phi }
            }
        }
    }

    /// Whether two kinds denote the same hardware matrix (aliases resolved,
    /// parameters compared to 1e-9).
    pub fn same_gate(&self, other: &GateKind) -> bool {
        if self.is_swap() || other.is_swap() {
            return self.is_swap() && other.is_swap();
        }
        let (a, b) = (self.fsim_params(), other.fsim_params());
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    }

    pub fn matrix(&self) -> Unitary {
        Unitary::from_matrix_unchecked(m4_to_matrix(&self.m4()))
    }

    pub(crate) fn m4(&self) -> M4 {
        match self {
            GateKind::Swap => swap_m4(),
            g => {
                let (t, p) = g.fsim_params();
                fsim_m4(t, p)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let (t, p) = self.fsim_params();
        if t.is_finite() && p.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid("gate angles must be finite"))
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::FSim { theta, phi } => write!(f, "fsim:{theta},{phi}"),
            GateKind::Cz => f.write_str("cz"),
            GateKind::Syc => f.write_str("syc"),
            GateKind::SqrtIswap => f.write_str("sqiswap"),
            GateKind::Iswap => f.write_str("iswap"),
            GateKind::Swap => f.write_str("swap"),
            GateKind::Xy(theta) => write!(f, "xy:{theta}"),
            GateKind::CPhase(phi) => write!(f, "cphase:{phi}"),
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    /// Accepts `cz`, `syc`, `sqiswap`, `iswap`, `swap`, `fsim:<θ>,<φ>`,
    /// `xy:<θ>` and `cphase:<φ>` (angles in radians, case-insensitive names).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let angle = |text: &str| -> Result<f64> {
            let v: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad angle {text:?} in gate {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("non-finite angle in gate {s:?}")))
            }
        };
        let kind = match lower.as_str() {
            "cz" => GateKind::Cz,
            "syc" => GateKind::Syc,
            "sqiswap" | "sqrt_iswap" | "sqrtiswap" => GateKind::SqrtIswap,
            "iswap" => GateKind::Iswap,
            "swap" => GateKind::Swap,
            _ => {
                if let Some(rest) = lower.strip_prefix("fsim:") {
                    let (t, p) = rest.split_once(',').ok_or_else(|| {
                        Error::Parse(format!("expected fsim:<theta>,<phi>, got {s:?}"))
                    })?;
                    GateKind::FSim {
                        theta: angle(t)?,
                        phi: angle(p)?,
                    }
                } else if let Some(rest) = lower.strip_prefix("xy:") {
                    GateKind::Xy(angle(rest)?)
                } else if let Some(rest) = lower.strip_prefix("cphase:") {
                    GateKind::CPhase(angle(rest)?)
                } else {
                    return Err(Error::Parse(format!("unknown gate name {s:?}")));
                }
            }
        };
        Ok(kind)
    }
}

/// Folds fSim parameters into `θ ∈ [0, π/2]`, `φ ∈ [0, π]`.
///
/// θ ↦ -θ and θ ↦ θ + π are conjugations/products by local Z gates, so θ is
/// reduced modulo π and reflected about π/2. φ is reduced modulo 2π and
/// reflected about π, which maps the gate to its complex conjugate; gate
/// counts over conjugation-closed ensembles are unchanged by that image.
pub fn canonicalize_fsim(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = wrap(theta, PI);
    if t > FRAC_PI_2 {
        t = PI - t;
    }
    let mut p = wrap(phi, TAU);
    if p > PI {
        p = TAU - p;
    }
    (t, p)
}

/// The fSim(θ, φ) matrix, taken literally (no canonicalization).
pub fn fsim_matrix(theta: f64, phi: f64) -> Result<Unitary> {
    GateKind::FSim { theta, phi }.validate()?;
    Ok(Unitary::from_matrix_unchecked(m4_to_matrix(&fsim_m4(
        theta, phi,
    ))))
}

pub fn swap_matrix() -> Unitary {
    Unitary::from_matrix_unchecked(m4_to_matrix(&swap_m4()))
}

pub(crate) fn fsim_m4(theta: f64, phi: f64) -> M4 {
    let (c, s) = (cos(theta), sin(theta));
    let mut m = [ZERO; 16];
    m[0] = ONE;
    m[5] = C64::new(c, 0.0);
    m[6] = C64::new(0.0, -s);
    m[9] = C64::new(0.0, -s);
    m[10] = C64::new(c, 0.0);
    m[15] = C64::from_polar(1.0, -phi);
    m
}

/// Derivatives of the fSim matrix with respect to θ and φ.
pub(crate) fn fsim_grad(theta: f64, phi: f64) -> [M4; 2] {
    let (c, s) = (cos(theta), sin(theta));
    let mut dt = [ZERO; 16];
    dt[5] = C64::new(-s, 0.0);
    dt[6] = C64::new(0.0, -c);
    dt[9] = C64::new(0.0, -c);
    dt[10] = C64::new(-s, 0.0);
    let mut dp = [ZERO; 16];
    dp[15] = C64::new(0.0, -1.0) * C64::from_polar(1.0, -phi);
    [dt, dp]
}

fn swap_m4() -> M4 {
    let mut m = [ZERO; 16];
    m[0] = ONE;
    m[6] = ONE;
    m[9] = ONE;
    m[15] = ONE;
    m
}

/// Angles of a generic single-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct U3Params {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl U3Params {
    pub const fn new(alpha: f64, beta: f64, lambda: f64) -> Self {
        U3Params {
            alpha,
            beta,
            lambda,
        }
    }

    pub(crate) fn m2(&self) -> M2 {
        u3_m2(self.alpha, self.beta, self.lambda)
    }
}

/// `U3(α, β, λ) = [[cos(α/2), -e^{iλ} sin(α/2)], [e^{iβ} sin(α/2), e^{i(β+λ)} cos(α/2)]]`.
pub fn u3_matrix(p: U3Params) -> Result<Unitary> {
    if !(p.alpha.is_finite() && p.beta.is_finite() && p.lambda.is_finite()) {
        return Err(Error::invalid("U3 angles must be finite"));
    }
    Ok(Unitary::from_matrix_unchecked(m2_to_matrix(&p.m2())))
}

#[inline]
pub(crate) fn u3_m2(alpha: f64, beta: f64, lambda: f64) -> M2 {
    let (c, s) = (cos(alpha / 2.0), sin(alpha / 2.0));
    let eb = C64::from_polar(1.0, beta);
    let el = C64::from_polar(1.0, lambda);
    [C64::new(c, 0.0), -el * s, eb * s, eb * el * c]
}

/// Partial derivatives of U3 with respect to (α, β, λ).
#[inline]
pub(crate) fn u3_grad(alpha: f64, beta: f64, lambda: f64) -> [M2; 3] {
    let (c, s) = (cos(alpha / 2.0), sin(alpha / 2.0));
    let eb = C64::from_polar(1.0, beta);
    let el = C64::from_polar(1.0, lambda);
    let ebl = eb * el;
    let i = C64::new(0.0, 1.0);
    [
        [
            C64::new(-s / 2.0, 0.0),
            -el * (c / 2.0),
            eb * (c / 2.0),
            -ebl * (s / 2.0),
        ],
        [ZERO, ZERO, i * eb * s, i * ebl * c],
        [ZERO, -i * el * s, ZERO, i * ebl * c],
    ]
}

/// Recovers `(p, γ)` with `m = e^{iγ} U3(p)` for a 2x2 unitary `m`.
pub fn u3_from_matrix(m: &Matrix) -> Result<(U3Params, f64)> {
    if m.dim() != 2 {
        return Err(Error::invalid(format!(
            "expected a 2x2 matrix, got {}x{}",
            m.dim(),
            m.dim()
        )));
    }
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let alpha = 2.0 * atan2(m10.norm(), m00.norm());
    const EPS: f64 = 1e-12;
    let (gamma, beta, lambda) = if m00.norm() > EPS && m10.norm() > EPS {
        let g = m00.arg();
        (g, m10.arg() - g, (-m01).arg() - g)
    } else if m00.norm() > EPS {
        // diagonal: only β + λ is defined
        let g = m00.arg();
        (g, m11.arg() - g, 0.0)
    } else {
        // anti-diagonal: cos(α/2) = 0
        let g = (-m01).arg();
        (g, m10.arg() - g, 0.0)
    };
    Ok((U3Params::new(alpha, beta, lambda), gamma))
}
