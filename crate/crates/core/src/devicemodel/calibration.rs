use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{DeviceModel, InstructionSet};
use crate::error::{Error, Result};

/// Per-pair, per-gate-type calibration budget.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationCostModel {
    pub circuits_cphase: u64,
    pub circuits_iswap: u64,
    pub circuits_theta_tune: u64,
    pub circuits_tomography: u64,
    pub circuits_xeb: u64,
    pub total_per_pair_per_type: u64,
    pub hours_per_type_per_pair: f64,
    pub parallelism: u32,
}

impl Default for CalibrationCostModel {
    fn default() -> Self {
        CalibrationCostModel {
            circuits_cphase: 2000,
            circuits_iswap: 2000,
            circuits_theta_tune: 2000,
            circuits_tomography: 3000,
            circuits_xeb: 1000,
            total_per_pair_per_type: 10_000,
            hours_per_type_per_pair: 2.0,
            parallelism: 1,
        }
    }
}

impl CalibrationCostModel {
    pub fn step_sum(&self) -> u64 {
        self.circuits_cphase
            + self.circuits_iswap
            + self.circuits_theta_tune
            + self.circuits_tomography
            + self.circuits_xeb
    }

    pub fn validate(&self) -> Result<()> {
        if self.step_sum() != self.total_per_pair_per_type {
            return Err(Error::invalid(format!(
                "calibration steps sum to {} but total_per_pair_per_type is {}",
                self.step_sum(),
                self.total_per_pair_per_type
            )));
        }
        if self.parallelism == 0 {
            return Err(Error::invalid("parallelism must be at least 1"));
        }
        if !(self.hours_per_type_per_pair.is_finite() && self.hours_per_type_per_pair >= 0.0) {
            return Err(Error::invalid(
                "hours_per_type_per_pair must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostEstimate {
    pub circuits: u64,
    pub hours: f64,
}

pub fn calibration_cost(
    model: &CalibrationCostModel,
    device: &DeviceModel,
    num_gate_types: usize,
) -> Result<CostEstimate> {
    model.validate()?;
    if num_gate_types == 0 {
        return Err(Error::invalid("num_gate_types must be at least 1"));
    }
    let pair_types = device.edge_count() as u64 * num_gate_types as u64;
    Ok(CostEstimate {
        circuits: pair_types * model.total_per_pair_per_type,
        hours: pair_types as f64 * model.hours_per_type_per_pair / f64::from(model.parallelism),
    })
}

/// One row of the cost/benefit table. `types`, `circuits` and `hours` are
/// `None` for continuous families, which cannot be calibrated point by point.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRow {
    pub set: String,
    pub types: Option<usize>,
    pub circuits: Option<u64>,
    pub hours: Option<f64>,
    pub metric: f64,
}

/// Rows sorted by number of gate types, continuous sets last.
pub fn tradeoff_report(
    model: &CalibrationCostModel,
    device: &DeviceModel,
    sets: &[InstructionSet],
    metrics: &BTreeMap<String, f64>,
) -> Result<Vec<TradeoffRow>> {
    let mut rows = Vec::with_capacity(sets.len());
    for set in sets {
        let metric = *metrics
            .get(&set.name)
            .ok_or_else(|| Error::invalid(format!("no metric for instruction set {}", set.name)))?;
        let cost = match set.num_types() {
            Some(n) => Some(calibration_cost(model, device, n)?),
            None => None,
        };
        rows.push(TradeoffRow {
            set: set.name.clone(),
            types: set.num_types(),
            circuits: cost.map(|c| c.circuits),
            hours: cost.map(|c| c.hours),
            metric,
        });
    }
    rows.sort_by_key(|r| r.types.unwrap_or(usize::MAX));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devicemodel::instruction_set;
    use alloc::vec;

    #[test]
    fn unit_case() {
        let mut d = DeviceModel::new(2);
        d.add_edge(0, 1, vec![]).unwrap();
        let c = calibration_cost(&CalibrationCostModel::default(), &d, 1).unwrap();
        assert_eq!(
            c,
            CostEstimate {
                circuits: 10_000,
                hours: 2.0
            }
        );
        assert!(calibration_cost(&CalibrationCostModel::default(), &d, 0).is_err());
    }

    #[test]
    fn inconsistent_steps_rejected() {
        let m = CalibrationCostModel {
            circuits_xeb: 5,
            ..Default::default()
        };
        assert!(m.validate().is_err());
        let m = CalibrationCostModel {
            parallelism: 0,
            ..Default::default()
        };
        assert!(m.validate().is_err());
    }

    #[test]
    fn report_sorting_and_sentinels() {
        let d = DeviceModel::ring(4, &[]).unwrap();
        let sets: Vec<_> = ["FullFSim", "G3", "S1"]
            .iter()
            .map(|n| instruction_set(n).unwrap())
            .collect();
        let mut metrics = BTreeMap::new();
        for s in &sets {
            metrics.insert(s.name.clone(), 1.0);
        }
        let rows = tradeoff_report(&CalibrationCostModel::default(), &d, &sets, &metrics).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.set.as_str()).collect();
        assert_eq!(names, ["S1", "G3", "FullFSim"]);
        assert_eq!(rows[2].circuits, None);
        assert_eq!(rows[1].circuits, Some(4 * 4 * 10_000));
        metrics.remove("G3");
        assert!(tradeoff_report(&CalibrationCostModel::default(), &d, &sets, &metrics).is_err());
        assert!(
            tradeoff_report(&CalibrationCostModel::default(), &d, &[], &BTreeMap::new())
                .unwrap()
                .is_empty()
        );
    }
}
