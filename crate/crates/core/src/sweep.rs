//! Expressivity of fSim gates over a `(θ, φ)` grid: exact two-qubit gate
//! counts for application ensembles at every grid point.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::circuitpass::{gen_fh, gen_qft, Op};
use crate::decomp::{decompose_exact_with, OptimizerConfig};
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::math::{FRAC_PI_2, PI, TAU};
use crate::qgates::{haar_su4, swap_matrix, zz_interaction, GateKind, Unitary};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    Qv,
    Qaoa,
    Qft,
    Fh,
    Swap,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Qv,
        Ensemble::Qaoa,
        Ensemble::Qft,
        Ensemble::Fh,
        Ensemble::Swap,
    ];

    /// Reduced sizes for desk-scale runs.
    pub fn default_size(self) -> usize {
        match self {
            Ensemble::Qv | Ensemble::Qaoa => 50,
            _ => self.full_size(),
        }
    }

    /// Ensemble sizes of the original characterization.
    pub fn full_size(self) -> usize {
        match self {
            Ensemble::Qv | Ensemble::Qaoa => 1000,
            Ensemble::Qft => 10,
            Ensemble::Fh => 60,
            Ensemble::Swap => 1,
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::Qv => "qv",
            Ensemble::Qaoa => "qaoa",
            Ensemble::Qft => "qft",
            Ensemble::Fh => "fh",
            Ensemble::Swap => "swap",
        })
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| format!("{e}").eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown ensemble {s:?}")))
    }
}

/// Grid over `θ ∈ [0, π/2]`, `φ ∈ [0, π]` with inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub theta_points: usize,
    pub phi_points: usize,
    pub ensemble: Ensemble,
    pub ensemble_size: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(ensemble: Ensemble) -> Self {
        SweepSpec {
            theta_points: 19,
            phi_points: 19,
            ensemble,
            ensemble_size: ensemble.default_size(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_points == 0 || self.phi_points == 0 {
            return Err(Error::invalid("grid needs at least one point per axis"));
        }
        if self.ensemble_size == 0 {
            return Err(Error::invalid("ensemble_size must be at least 1"));
        }
        Ok(())
    }

    pub fn theta(&self, i: usize) -> f64 {
        axis(i, self.theta_points, FRAC_PI_2)
    }

    pub fn phi(&self, j: usize) -> f64 {
        axis(j, self.phi_points, PI)
    }

    pub fn cell_count(&self) -> usize {
        self.theta_points * self.phi_points
    }

    fn same_grid(&self, other: &SweepSpec) -> bool {
        self.theta_points == other.theta_points && self.phi_points == other.phi_points
    }
}

fn axis(i: usize, points: usize, end: f64) -> f64 {
    if points == 1 {
        0.0
    } else {
        end * i as f64 / (points - 1) as f64
    }
}

/// Target unitaries of an ensemble, deterministic in `spec.seed`.
///
/// QV draws Haar-random SU(4); QAOA draws ZZ interactions with angles
/// uniform in `[0, 2π)`; QFT and FH cycle through the two-qubit ops of a
/// 5-qubit QFT and a 10-qubit Fermi-Hubbard step.
pub fn ensemble_members(spec: &SweepSpec) -> Result<Vec<Unitary>> {
    let stream = seed::child(spec.seed, 1);
    let n = spec.ensemble_size;
    let from_circuit = |ops: &[Op]| -> Vec<Unitary> {
        let two: Vec<&Unitary> = ops
            .iter()
            .filter_map(|o| match o {
                Op::Unitary2q { matrix, .. } => Some(matrix),
                _ => None,
            })
            .collect();
        (0..n).map(|m| two[m % two.len()].clone()).collect()
    };
    Ok(match spec.ensemble {
        Ensemble::Qv => (0..n)
            .map(|m| haar_su4(seed::child(stream, m as u64)))
            .collect(),
        Ensemble::Qaoa => {
            let mut rng = seed::rng(stream);
            (0..n)
                .map(|_| zz_interaction(rng.random_range(0.0..TAU)))
                .collect()
        }
        Ensemble::Qft => from_circuit(gen_qft(5)?.ops()),
        Ensemble::Fh => from_circuit(gen_fh(10, stream)?.ops()),
        Ensemble::Swap => (0..n).map(|_| swap_matrix()).collect(),
    })
}

/// Optimizer seed of ensemble member `m`, identical at every grid point.
pub fn member_seed(spec: &SweepSpec, m: usize) -> u64 {
    seed::child(seed::child(spec.seed, 2), m as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub theta: f64,
    pub phi: f64,
    /// Mean layer count over members that decomposed; `None` if all failed.
    pub mean_count: Option<f64>,
    pub min_count: Option<usize>,
    pub max_count: Option<usize>,
    /// Members that did not reach the exact threshold within `max_layers`.
    pub failures: usize,
}

impl CellStats {
    fn from_counts(theta: f64, phi: f64, counts: &[Option<usize>]) -> Self {
        let ok: Vec<usize> = counts.iter().flatten().copied().collect();
        CellStats {
            theta,
            phi,
            mean_count: (!ok.is_empty()).then(|| ok.iter().sum::<usize>() as f64 / ok.len() as f64),
            min_count: ok.iter().min().copied(),
            max_count: ok.iter().max().copied(),
            failures: counts.len() - ok.len(),
        }
    }

    /// Mean with every failure counted as `penalty` layers.
    pub fn penalized_mean(&self, size: usize, penalty: usize) -> f64 {
        let ok = size - self.failures;
        (self.mean_count.unwrap_or(0.0) * ok as f64 + (self.failures * penalty) as f64)
            / size as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub max_layers: usize,
    /// θ-major: cell `(i, j)` at index `i · phi_points + j`.
    pub cells: Vec<CellStats>,
    /// Filled in by callers that have a clock.
    pub wall_time_secs: Option<f64>,
}

impl SweepResult {
    pub fn cell(&self, i: usize, j: usize) -> &CellStats {
        &self.cells[i * self.spec.phi_points + j]
    }
}

fn member_count<E: Executor>(
    exec: &E,
    spec: &SweepSpec,
    cfg: &OptimizerConfig,
    gate: GateKind,
    target: &Unitary,
    m: usize,
) -> Result<Option<usize>> {
    let cfg = cfg.clone().with_seed(member_seed(spec, m));
    match decompose_exact_with(exec, target, gate, &cfg) {
        Ok(d) => Ok(Some(d.layers())),
        Err(Error::CapacityExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Layer statistics of the ensemble at an arbitrary `(θ, φ)`.
pub fn evaluate_point(
    spec: &SweepSpec,
    cfg: &OptimizerConfig,
    theta: f64,
    phi: f64,
) -> Result<CellStats> {
    spec.validate()?;
    cfg.validate()?;
    let members = ensemble_members(spec)?;
    let gate = GateKind::FSim { theta, phi };
    let counts = members
        .iter()
        .enumerate()
        .map(|(m, u)| member_count(&Serial, spec, cfg, gate, u, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellStats::from_counts(theta, phi, &counts))
}

pub fn run_sweep(spec: &SweepSpec, cfg: &OptimizerConfig) -> Result<SweepResult> {
    run_sweep_with(&Serial, spec, cfg)
}

/// Decomposes every ensemble member exactly at every grid point. The
/// `(cell, member)` pairs are spread over `exec`; results are assembled by
/// position, so the output is the same for any executor.
///
/// Each member's optimizer seed is [`member_seed`], so `cfg.rng_seed` is not
/// used.
pub fn run_sweep_with<E: Executor>(
    exec: &E,
    spec: &SweepSpec,
    cfg: &OptimizerConfig,
) -> Result<SweepResult> {
    spec.validate()?;
    cfg.validate()?;
    let members = ensemble_members(spec)?;
    let size = spec.ensemble_size;
    let counts = exec.map(spec.cell_count() * size, |t| {
        let (cell, m) = (t / size, t % size);
        let gate = GateKind::FSim {
            theta: spec.theta(cell / spec.phi_points),
            phi: spec.phi(cell % spec.phi_points),
        };
        member_count(&Serial, spec, cfg, gate, &members[m], m)
    });
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let cells = counts
        .chunks_exact(size)
        .enumerate()
        .map(|(cell, c)| {
            CellStats::from_counts(
                spec.theta(cell / spec.phi_points),
                spec.phi(cell % spec.phi_points),
                c,
            )
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        max_layers: cfg.max_layers,
        cells,
        wall_time_secs: None,
    })
}

/// Ranks grid points by mean layer count summed over `results` (failures
/// count as `max_layers + 1`) and returns the `k` best distinct gates.
pub fn select_gate_shortlist(results: &[SweepResult], k: usize) -> Result<Vec<GateKind>> {
    let first = results
        .first()
        .ok_or_else(|| Error::invalid("no sweep results given"))?;
    if results.iter().any(|r| !r.spec.same_grid(&first.spec)) {
        return Err(Error::invalid("sweep results cover different grids"));
    }
    let mut scored: Vec<(f64, usize)> = (0..first.cells.len())
        .map(|c| {
            let score = results
                .iter()
                .map(|r| r.cells[c].penalized_mean(r.spec.ensemble_size, r.max_layers + 1))
                .sum();
            (score, c)
        })
        .collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut out: Vec<GateKind> = Vec::new();
    for (_, c) in scored {
        if out.len() == k {
            break;
        }
        let cell = &first.cells[c];
        let gate = GateKind::FSim {
            theta: cell.theta,
            phi: cell.phi,
        };
        if !out.iter().any(|g| g.same_gate(&gate)) {
            out.push(gate);
        }
    }
    Ok(out)
}
