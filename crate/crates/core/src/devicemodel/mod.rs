//! Device topology with per-edge gate fidelities, the instruction-set
//! registry and the calibration cost model.

mod calibration;
mod isa;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

pub use calibration::{
    calibration_cost, tradeoff_report, CalibrationCostModel, CostEstimate, TradeoffRow,
};
pub use isa::{instruction_set, instruction_set_names, InstructionSet, Members};

use crate::error::{Error, Result};
use crate::qgates::GateKind;

/// Calibrated gate kinds on one coupled pair, stored with `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub gates: Vec<(GateKind, f64)>,
}

impl Edge {
    pub fn fidelity(&self, gate: &GateKind) -> Option<f64> {
        self.gates
            .iter()
            .find(|(g, _)| g.same_gate(gate))
            .map(|(_, f)| *f)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeviceModel {
    qubit_count: usize,
    edges: Vec<Edge>,
    single_qubit_fidelity: BTreeMap<usize, f64>,
}

fn check_fidelity(f: f64, what: &dyn core::fmt::Display) -> Result<()> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what}: fidelity {f} outside (0, 1]"
        )))
    }
}

impl DeviceModel {
    pub fn new(qubit_count: usize) -> Self {
        DeviceModel {
            qubit_count,
            ..Default::default()
        }
    }

    /// Adds an undirected coupling. Fails on self-loops, out-of-range qubits,
    /// duplicate edges, duplicate gate kinds and fidelities outside (0, 1].
    pub fn add_edge(&mut self, a: usize, b: usize, gates: Vec<(GateKind, f64)>) -> Result<()> {
        if a == b {
            return Err(Error::invalid(format!("self-loop on qubit {a}")));
        }
        if a >= self.qubit_count || b >= self.qubit_count {
            return Err(Error::invalid(format!(
                "edge ({a}, {b}) references a qubit outside 0..{}",
                self.qubit_count
            )));
        }
        let (a, b) = (a.min(b), a.max(b));
        if self.edge(a, b).is_some() {
            return Err(Error::invalid(format!("duplicate edge ({a}, {b})")));
        }
        for (i, (g, f)) in gates.iter().enumerate() {
            check_fidelity(*f, &format_args!("edge ({a}, {b}) gate {g}"))?;
            if gates[..i].iter().any(|(h, _)| h.same_gate(g)) {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) lists gate {g} twice"
                )));
            }
        }
        self.edges.push(Edge { a, b, gates });
        Ok(())
    }

    pub fn set_single_qubit_fidelity(&mut self, q: usize, f: f64) -> Result<()> {
        if q >= self.qubit_count {
            return Err(Error::invalid(format!(
                "qubit {q} outside 0..{}",
                self.qubit_count
            )));
        }
        check_fidelity(f, &format_args!("qubit {q}"))?;
        self.single_qubit_fidelity.insert(q, f);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The coupling between `a` and `b` in either order.
    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge> {
        let (a, b) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.a == a && e.b == b)
    }

    pub fn fidelity(&self, a: usize, b: usize, gate: &GateKind) -> Option<f64> {
        self.edge(a, b).and_then(|e| e.fidelity(gate))
    }

    /// Explicitly set single-qubit fidelities.
    pub fn single_qubit_fidelities(&self) -> &BTreeMap<usize, f64> {
        &self.single_qubit_fidelity
    }

    /// Single-qubit fidelity of `q`, 1.0 when not given.
    pub fn single_qubit_fidelity(&self, q: usize) -> f64 {
        self.single_qubit_fidelity.get(&q).copied().unwrap_or(1.0)
    }

    /// `n` qubits in a ring, every edge carrying `gates`.
    pub fn ring(n: usize, gates: &[(GateKind, f64)]) -> Result<Self> {
        let mut d = DeviceModel::new(n);
        if n >= 2 {
            for q in 0..n {
                let next = (q + 1) % n;
                if n == 2 && q == 1 {
                    break;
                }
                d.add_edge(q, next, gates.to_vec())?;
            }
        }
        Ok(d)
    }

    /// Rectangular nearest-neighbour grid with `rows × cols` qubits.
    pub fn grid(rows: usize, cols: usize, gates: &[(GateKind, f64)]) -> Result<Self> {
        let mut d = DeviceModel::new(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                if c + 1 < cols {
                    d.add_edge(q, q + 1, gates.to_vec())?;
                }
                if r + 1 < rows {
                    d.add_edge(q, q + cols, gates.to_vec())?;
                }
            }
        }
        Ok(d)
    }

    /// Staggered (diagonal) lattice with `rows` rows of `cols` qubits, where
    /// each qubit couples to two neighbours in the next row. 9 × 6 gives the
    /// 54-qubit, 88-coupler layout of Google's Sycamore chip.
    pub fn staggered_grid(rows: usize, cols: usize, gates: &[(GateKind, f64)]) -> Result<Self> {
        let mut d = DeviceModel::new(rows * cols);
        for r in 0..rows.saturating_sub(1) {
            for c in 0..cols {
                let q = r * cols + c;
                d.add_edge(q, q + cols, gates.to_vec())?;
                if r % 2 == 0 && c + 1 < cols {
                    d.add_edge(q, q + cols + 1, gates.to_vec())?;
                } else if r % 2 == 1 && c > 0 {
                    d.add_edge(q, q + cols - 1, gates.to_vec())?;
                }
            }
        }
        Ok(d)
    }

    pub fn sycamore_like(gates: &[(GateKind, f64)]) -> Result<Self> {
        Self::staggered_grid(9, 6, gates)
    }
}
