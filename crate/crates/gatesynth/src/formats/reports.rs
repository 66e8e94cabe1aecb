use gatesynth_core::circuitpass::CompileReport;
use gatesynth_core::devicemodel::{CalibrationCostModel, TradeoffRow};
use gatesynth_core::sweep::SweepResult;
use serde::{Deserialize, Serialize};

use super::csv_string;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRow {
    pub op_index: usize,
    pub a: usize,
    pub b: usize,
    pub gate: String,
    pub layers: usize,
    pub f_d: f64,
    pub f_h: f64,
    pub f_u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileReportFile {
    pub per_gate: Vec<GateRow>,
    pub two_qubit_count: usize,
    pub est_fidelity: f64,
    /// `|Tr(U_c† U_o)| / 2^n` of the compiled circuit, when computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification_fidelity: Option<f64>,
}

pub fn compile_report_file(r: &CompileReport, verification: Option<f64>) -> CompileReportFile {
    CompileReportFile {
        per_gate: r
            .per_gate
            .iter()
            .map(|g| GateRow {
                op_index: g.op_index,
                a: g.a,
                b: g.b,
                gate: g.gate.to_string(),
                layers: g.layers,
                f_d: g.f_d,
                f_h: g.f_h,
                f_u: g.f_u,
            })
            .collect(),
        two_qubit_count: r.two_qubit_count,
        est_fidelity: r.est_fidelity,
        verification_fidelity: verification,
    }
}

/// One row per decomposed op.
pub fn compile_report_csv(r: &CompileReport) -> Result<String> {
    csv_string(compile_report_file(r, None).per_gate)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub theta: f64,
    pub phi: f64,
    pub mean_count: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFile {
    pub ensemble: String,
    pub theta_points: usize,
    pub phi_points: usize,
    pub ensemble_size: usize,
    pub seed: u64,
    pub max_layers: usize,
    /// Excluded from reproducibility comparisons.
    pub wall_time_secs: Option<f64>,
    pub cells: Vec<CellRow>,
}

pub fn sweep_file(r: &SweepResult) -> SweepFile {
    SweepFile {
        ensemble: r.spec.ensemble.to_string(),
        theta_points: r.spec.theta_points,
        phi_points: r.spec.phi_points,
        ensemble_size: r.spec.ensemble_size,
        seed: r.spec.seed,
        max_layers: r.max_layers,
        wall_time_secs: r.wall_time_secs,
        cells: r
            .cells
            .iter()
            .map(|c| CellRow {
                theta: c.theta,
                phi: c.phi,
                mean_count: c.mean_count,
                min: c.min_count,
                max: c.max_count,
                failures: c.failures,
            })
            .collect(),
    }
}

/// Heatmap data, θ-major: `theta,phi,mean_count,min,max,failures`.
pub fn sweep_csv(r: &SweepResult) -> Result<String> {
    csv_string(sweep_file(r).cells)
}

/// Calibration settings; omitted fields take their defaults, and an omitted
/// total is the sum of the step counts.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub circuits_cphase: Option<u64>,
    pub circuits_iswap: Option<u64>,
    pub circuits_theta_tune: Option<u64>,
    pub circuits_tomography: Option<u64>,
    pub circuits_xeb: Option<u64>,
    pub total_per_pair_per_type: Option<u64>,
    pub hours_per_type_per_pair: Option<f64>,
    pub parallelism: Option<u32>,
}

impl CalibrationFile {
    pub fn to_model(&self) -> Result<CalibrationCostModel> {
        let d = CalibrationCostModel::default();
        let mut m = CalibrationCostModel {
            circuits_cphase: self.circuits_cphase.unwrap_or(d.circuits_cphase),
            circuits_iswap: self.circuits_iswap.unwrap_or(d.circuits_iswap),
            circuits_theta_tune: self.circuits_theta_tune.unwrap_or(d.circuits_theta_tune),
            circuits_tomography: self.circuits_tomography.unwrap_or(d.circuits_tomography),
            circuits_xeb: self.circuits_xeb.unwrap_or(d.circuits_xeb),
            total_per_pair_per_type: 0,
            hours_per_type_per_pair: self
                .hours_per_type_per_pair
                .unwrap_or(d.hours_per_type_per_pair),
            parallelism: self.parallelism.unwrap_or(d.parallelism),
        };
        m.total_per_pair_per_type = self.total_per_pair_per_type.unwrap_or_else(|| m.step_sum());
        m.validate()
            .map_err(|e| Error::format("calibration config", e))?;
        Ok(m)
    }
}

pub fn calibration_from_json(text: &str) -> Result<CalibrationCostModel> {
    super::from_json::<CalibrationFile>(text, "calibration config")?.to_model()
}

pub fn calibration_to_json(m: &CalibrationCostModel) -> String {
    super::to_json(&CalibrationFile {
        circuits_cphase: Some(m.circuits_cphase),
        circuits_iswap: Some(m.circuits_iswap),
        circuits_theta_tune: Some(m.circuits_theta_tune),
        circuits_tomography: Some(m.circuits_tomography),
        circuits_xeb: Some(m.circuits_xeb),
        total_per_pair_per_type: Some(m.total_per_pair_per_type),
        hours_per_type_per_pair: Some(m.hours_per_type_per_pair),
        parallelism: Some(m.parallelism),
    })
}

/// A count that is either finite or the string `"unbounded"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Bounded<T> {
    Value(T),
    Unbounded(&'static str),
}

impl<T> From<Option<T>> for Bounded<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Bounded::Unbounded("unbounded"), Bounded::Value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffRowFile {
    pub set: String,
    pub types: Bounded<usize>,
    pub circuits: Bounded<u64>,
    pub hours: Bounded<f64>,
    pub metric: f64,
}

pub fn tradeoff_file(rows: &[TradeoffRow]) -> Vec<TradeoffRowFile> {
    rows.iter()
        .map(|r| TradeoffRowFile {
            set: r.set.clone(),
            types: r.types.into(),
            circuits: r.circuits.into(),
            hours: r.hours.into(),
            metric: r.metric,
        })
        .collect()
}

pub fn tradeoff_csv(rows: &[TradeoffRow]) -> Result<String> {
    csv_string(tradeoff_file(rows))
}
