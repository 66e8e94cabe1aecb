//! Layered-template synthesis of two-qubit unitaries.
//!
//! A target is approximated by `[U3⊗U3] · (G · [U3⊗U3])^i` where `G` is a
//! hardware gate and the single-qubit angles are fitted by BFGS from random
//! starting points. The layer count grows from zero until the fit is good
//! enough ([`decompose_exact`]), until the product of fit quality and
//! hardware fidelity stops improving ([`decompose_approx`]), or with the
//! two-qubit gate angles also free ([`decompose_continuous`]).

mod bfgs;
mod template;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

pub use template::{build_template_unitary, Template};

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::math::{powi, TAU};
use crate::qgates::{hs_fidelity, GateKind, Unitary};
use crate::seed;
use template::{Objective, Shape};

/// Continuous gate families whose angles are optimized together with the
/// single-qubit rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// fSim(θ, φ) with both angles free.
    FullFSim,
    /// XY(2θ) = fSim(θ, 0).
    FullXy,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::FullFSim => "fullfsim",
            Family::FullXy => "fullxy",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fullfsim" => Ok(Family::FullFSim),
            "fullxy" => Ok(Family::FullXy),
            _ => Err(Error::Parse(format!("unknown gate family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemplateGate {
    Fixed(GateKind),
    Free(Family),
}

impl fmt::Display for TemplateGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateGate::Fixed(g) => g.fmt(f),
            TemplateGate::Free(family) => family.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    Analytic,
    /// Central differences with [`OptimizerConfig::grad_step`].
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Largest two-qubit layer count tried.
    pub max_layers: usize,
    /// Random restarts per layer count.
    pub restarts: usize,
    /// Finite-difference step, used with [`GradientMode::FiniteDifference`].
    pub grad_step: f64,
    /// Gradient-norm stopping tolerance for a single BFGS run.
    pub conv_tol: f64,
    /// Iteration cap for a single BFGS run.
    pub max_iters: usize,
    /// Infidelity `1 - f_d` at which a decomposition counts as exact.
    pub exact_infidelity: f64,
    pub rng_seed: u64,
    pub gradient: GradientMode,
    /// Stop restarting a layer count once this many restarts agree on the
    /// best (non-exact) objective value. 0 (the default) disables the rule;
    /// enabling it trades occasional missed optima for speed.
    pub consensus: usize,
    /// A single BFGS run stops once the infidelity falls below this.
    pub stop_infidelity: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_layers: 10,
            restarts: 10,
            grad_step: 1e-7,
            conv_tol: 1e-10,
            max_iters: 1000,
            exact_infidelity: 1e-6,
            rng_seed: 0,
            gradient: GradientMode::Analytic,
            consensus: 0,
            stop_infidelity: 1e-12,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if !(self.exact_infidelity > 0.0 && self.exact_infidelity < 1.0) {
            return Err(Error::invalid("exact_infidelity must lie in (0, 1)"));
        }
        if !(self.grad_step > 0.0 && self.grad_step.is_finite()) {
            return Err(Error::invalid("grad_step must be positive"));
        }
        if !(self.conv_tol >= 0.0) || !(self.stop_infidelity >= 0.0) {
            return Err(Error::invalid("tolerances must be non-negative"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// A fitted template together with its fidelity figures.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub target: Unitary,
    pub template: Template,
    /// `|Tr(U_d† U_t)| / 4`
    pub f_d: f64,
    /// Estimated hardware fidelity of the template's gates.
    pub f_h: f64,
    /// `f_d · f_h`
    pub f_u: f64,
}

impl Decomposition {
    pub fn layers(&self) -> usize {
        self.template.layers
    }

    pub fn two_qubit_count(&self) -> usize {
        self.template.layers
    }

    pub fn infidelity(&self) -> f64 {
        1.0 - self.f_d
    }

    pub fn with_hardware_fidelity(mut self, f_h: f64) -> Self {
        self.f_h = f_h;
        self.f_u = self.f_d * f_h;
        self
    }

    pub fn unitary(&self) -> Unitary {
        self.template.unitary()
    }
}

// Two restart results closer than this count as the same local optimum.
const CONSENSUS_TOL: f64 = 1e-7;

fn check_target(target: &Unitary) -> Result<()> {
    if target.dim() != 4 {
        return Err(Error::invalid(format!(
            "target must be 4x4, got {}x{}",
            target.dim(),
            target.dim()
        )));
    }
    let dev = target.unitarity_deviation();
    if !(dev <= crate::qgates::UNITARITY_TOL) {
        return Err(Error::invalid(format!(
            "target is not unitary (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

fn check_gate(gate: &TemplateGate) -> Result<()> {
    if let TemplateGate::Fixed(g) = gate {
        let (t, p) = g.fsim_params();
        if !(t.is_finite() && p.is_finite()) {
            return Err(Error::invalid("gate angles must be finite"));
        }
    }
    Ok(())
}

fn run_restart(
    objective: &Objective,
    cfg: &OptimizerConfig,
    layers: usize,
    restart: usize,
) -> (Vec<f64>, f64) {
    let mut rng = seed::rng(seed::child(
        seed::child(cfg.rng_seed, layers as u64),
        restart as u64,
    ));
    let n = objective.n_params();
    let x0: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
    let settings = bfgs::Settings {
        max_iters: cfg.max_iters,
        grad_tol: cfg.conv_tol,
        f_stop: cfg.stop_infidelity,
    };
    let out = match cfg.gradient {
        GradientMode::Analytic => bfgs::minimize(|x, g| objective.value_grad(x, g), x0, &settings),
        GradientMode::FiniteDifference => bfgs::minimize(
            |x, g| objective.value_grad_fd(x, g, cfg.grad_step),
            x0,
            &settings,
        ),
    };
    (out.x, out.f)
}

/// Restart loop shared by every mode. Restarts run in index order (in
/// batches of the executor's width) and stop after the first one that is
/// exact or once `cfg.consensus` restarts agree on the best value. Batches
/// are scanned in index order, so the result does not depend on the width.
fn fit_layers<E: Executor>(
    exec: &E,
    target: &Unitary,
    gate: TemplateGate,
    layers: usize,
    cfg: &OptimizerConfig,
) -> Decomposition {
    let objective = Objective::new(Shape::new(layers, &gate), target);
    let mut runs: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut next = 0;
    'outer: while next < cfg.restarts {
        let batch = exec.width().max(1).min(cfg.restarts - next);
        let out = exec.map(batch, |k| run_restart(&objective, cfg, layers, next + k));
        for r in out {
            runs.push(r);
            if stop_restarts(&runs, cfg) {
                break 'outer;
            }
        }
        next += batch;
    }
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.1 < runs[best].1 {
            best = i;
        }
    }
    let params = runs.swap_remove(best).0;
    let template = Template {
        layers,
        gate,
        params: pin_xy_phases(layers, &gate, params),
    };
    let f_d = hs_fidelity(&template.unitary(), target).expect("4x4 operands");
    Decomposition {
        target: target.clone(),
        template,
        f_d,
        f_h: 1.0,
        f_u: f_d,
    }
}

fn pin_xy_phases(layers: usize, gate: &TemplateGate, mut params: Vec<f64>) -> Vec<f64> {
    if let TemplateGate::Free(Family::FullXy) = gate {
        let base = 6 * (layers + 1);
        for k in 0..layers {
            params[base + 2 * k + 1] = 0.0;
        }
    }
    params
}

fn stop_restarts(runs: &[(Vec<f64>, f64)], cfg: &OptimizerConfig) -> bool {
    let last = runs.last().expect("non-empty").1;
    if last <= cfg.exact_infidelity {
        return true;
    }
    if cfg.consensus == 0 {
        return false;
    }
    let best = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    runs.iter().filter(|r| r.1 - best <= CONSENSUS_TOL).count() >= cfg.consensus
}

/// The optimizer's loss `1 - |Tr(U_d† U_t)|/4` at `template` and its
/// gradient with respect to `template.params`, computed with `cfg.gradient`
/// (and `cfg.grad_step` for finite differences).
pub fn objective_gradient(
    template: &Template,
    target: &Unitary,
    cfg: &OptimizerConfig,
) -> Result<(f64, Vec<f64>)> {
    check_target(target)?;
    build_template_unitary(template)?;
    let objective = Objective::new(Shape::new(template.layers, &template.gate), target);
    let mut grad = alloc::vec![0.0; template.params.len()];
    let f = match cfg.gradient {
        GradientMode::Analytic => objective.value_grad(&template.params, &mut grad),
        GradientMode::FiniteDifference => {
            objective.value_grad_fd(&template.params, &mut grad, cfg.grad_step)
        }
    };
    Ok((f, grad))
}

/// Fits a template with exactly `layers` copies of `gate`. The returned
/// decomposition has `f_h = 1`.
pub fn optimize_fixed(
    target: &Unitary,
    gate: GateKind,
    layers: usize,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    optimize_fixed_with(&Serial, target, gate, layers, cfg)
}

pub fn optimize_fixed_with<E: Executor>(
    exec: &E,
    target: &Unitary,
    gate: GateKind,
    layers: usize,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    cfg.validate()?;
    check_target(target)?;
    let gate = TemplateGate::Fixed(gate);
    check_gate(&gate)?;
    Ok(fit_layers(exec, target, gate, layers, cfg))
}

fn layer_search<E: Executor>(
    exec: &E,
    target: &Unitary,
    gate: TemplateGate,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    cfg.validate()?;
    check_target(target)?;
    check_gate(&gate)?;
    let mut best: Option<Decomposition> = None;
    for layers in 0..=cfg.max_layers {
        let d = fit_layers(exec, target, gate, layers, cfg);
        if d.infidelity() <= cfg.exact_infidelity {
            return Ok(d);
        }
        if best.as_ref().is_none_or(|b| d.f_d > b.f_d) {
            best = Some(d);
        }
    }
    Err(Error::CapacityExceeded {
        message: format!(
            "no decomposition within {} layers reaches infidelity {:.1e}",
            cfg.max_layers, cfg.exact_infidelity
        ),
        best: best.map(Box::new),
    })
}

/// Smallest layer count whose fit reaches `cfg.exact_infidelity`.
pub fn decompose_exact(
    target: &Unitary,
    gate: GateKind,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    decompose_exact_with(&Serial, target, gate, cfg)
}

pub fn decompose_exact_with<E: Executor>(
    exec: &E,
    target: &Unitary,
    gate: GateKind,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    layer_search(exec, target, TemplateGate::Fixed(gate), cfg)
}

/// Like [`decompose_exact`] with the two-qubit gate angles of every layer
/// also optimized.
pub fn decompose_continuous(
    target: &Unitary,
    family: Family,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    decompose_continuous_with(&Serial, target, family, cfg)
}

pub fn decompose_continuous_with<E: Executor>(
    exec: &E,
    target: &Unitary,
    family: Family,
    cfg: &OptimizerConfig,
) -> Result<Decomposition> {
    layer_search(exec, target, TemplateGate::Free(family), cfg)
}

/// Hardware fidelity of a template with `layers` two-qubit gates of fidelity
/// `gate_fidelity` and `2·(layers+1)` single-qubit gates of fidelity `f1q`.
pub fn hardware_fidelity(gate_fidelity: f64, layers: usize, f1q: f64) -> f64 {
    powi(gate_fidelity, layers as i32) * powi(f1q, 2 * (layers as i32 + 1))
}

// Candidates whose f_u differ by less than this are ties.
const TIE_TOL: f64 = 1e-12;

/// Maximizes `f_d · f_h` over gate kinds and layer counts.
///
/// Ties prefer fewer layers, then the earlier gate in `gates`. A `(gate,
/// layers)` pair is skipped once its hardware fidelity alone cannot beat the
/// incumbent.
pub fn decompose_approx(
    target: &Unitary,
    gates: &[(GateKind, f64)],
    cfg: &OptimizerConfig,
    f1q: f64,
) -> Result<Decomposition> {
    decompose_approx_with(&Serial, target, gates, cfg, f1q)
}

pub fn decompose_approx_with<E: Executor>(
    exec: &E,
    target: &Unitary,
    gates: &[(GateKind, f64)],
    cfg: &OptimizerConfig,
    f1q: f64,
) -> Result<Decomposition> {
    cfg.validate()?;
    check_target(target)?;
    if gates.is_empty() {
        return Err(Error::invalid("at least one gate kind is required"));
    }
    for (g, fid) in gates {
        check_gate(&TemplateGate::Fixed(*g))?;
        if !(*fid > 0.0 && *fid <= 1.0) {
            return Err(Error::invalid(format!(
                "fidelity of {g} must lie in (0, 1], got {fid}"
            )));
        }
    }
    if !(f1q > 0.0 && f1q <= 1.0) {
        return Err(Error::invalid(format!(
            "single-qubit fidelity must lie in (0, 1], got {f1q}"
        )));
    }

    let mut best: Option<Decomposition> = None;
    for layers in 0..=cfg.max_layers {
        let mut any_open = false;
        for (g, fid) in gates {
            let f_h = hardware_fidelity(*fid, layers, f1q);
            let incumbent = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.f_u);
            if f_h <= incumbent + TIE_TOL {
                continue;
            }
            any_open = true;
            let d = fit_layers(exec, target, TemplateGate::Fixed(*g), layers, cfg)
                .with_hardware_fidelity(f_h);
            if d.f_u > incumbent + TIE_TOL {
                best = Some(d);
            }
        }
        if !any_open {
            break;
        }
    }
    Ok(best.expect("layer 0 is always evaluated"))
}
