//! Circuit representation, benchmark generators and the pass that replaces
//! every two-qubit application unitary with its best hardware decomposition.

mod generators;
mod verify;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use generators::{gen_fh, gen_qaoa, gen_qft, gen_qv};
pub use verify::{circuit_unitary, verify_circuit, MAX_VERIFY_QUBITS};

use crate::decomp::{
    decompose_approx_with, decompose_continuous_with, decompose_exact_with, hardware_fidelity,
    Decomposition, OptimizerConfig, TemplateGate,
};
use crate::devicemodel::{DeviceModel, InstructionSet, Members};
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::math::sqrt;
use crate::qgates::small::{m2_to_matrix, mul2, M2};
use crate::qgates::{u3_from_matrix, GateKind, U3Params, Unitary};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    U3 {
        q: usize,
        params: U3Params,
    },
    /// Application-level two-qubit unitary; `a` is the high (first) tensor
    /// factor.
    Unitary2q {
        a: usize,
        b: usize,
        matrix: Unitary,
        label: Option<String>,
    },
    /// Native hardware gate.
    Gate2q {
        a: usize,
        b: usize,
        gate: GateKind,
    },
}

impl Op {
    pub fn unitary(a: usize, b: usize, matrix: Unitary) -> Self {
        Op::Unitary2q {
            a,
            b,
            matrix,
            label: None,
        }
    }

    pub fn labelled(a: usize, b: usize, matrix: Unitary, label: String) -> Self {
        Op::Unitary2q {
            a,
            b,
            matrix,
            label: Some(label),
        }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match self {
            Op::U3 { q, .. } => (*q, None),
            Op::Unitary2q { a, b, .. } | Op::Gate2q { a, b, .. } => (*a, Some(*b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit {
            qubit_count,
            ops: Vec::new(),
        }
    }

    pub fn from_ops(qubit_count: usize, ops: Vec<Op>) -> Result<Self> {
        let mut c = Circuit::new(qubit_count);
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, op: Op) -> Result<()> {
        let n = self.qubit_count;
        let idx = self.ops.len();
        match op.qubits() {
            (q, None) if q >= n => {
                return Err(Error::invalid(format!(
                    "op {idx}: qubit {q} outside 0..{n}"
                )));
            }
            (a, Some(b)) if a >= n || b >= n || a == b => {
                return Err(Error::invalid(format!(
                    "op {idx}: bad qubit pair ({a}, {b}) for {n} qubits"
                )));
            }
            _ => {}
        }
        if let Op::Unitary2q { matrix, .. } = &op {
            if matrix.dim() != 4 {
                return Err(Error::invalid(format!(
                    "op {idx}: two-qubit unitary must be 4x4"
                )));
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn two_qubit_unitary_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, Op::Unitary2q { .. }))
            .count()
    }

    pub fn hardware_gate_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, Op::Gate2q { .. }))
            .count()
    }

    /// True when only U3 and hardware gates remain.
    pub fn is_compiled(&self) -> bool {
        self.two_qubit_unitary_count() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompileMode {
    /// Smallest exact decomposition per instruction-set member, best `F_u`
    /// among them.
    Exact,
    /// Noise-adaptive approximate synthesis.
    #[default]
    Approx,
    /// Continuous gate family, every layer's angles free.
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompileOptions {
    pub mode: CompileMode,
    /// Per-gate fidelity assumed for every edge in continuous mode.
    pub family_fidelity: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            mode: CompileMode::Approx,
            family_fidelity: 1.0,
        }
    }
}

impl CompileOptions {
    pub fn mode(mode: CompileMode) -> Self {
        CompileOptions {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    /// Index of the op in the input circuit.
    pub op_index: usize,
    pub a: usize,
    pub b: usize,
    pub gate: TemplateGate,
    pub layers: usize,
    pub f_d: f64,
    pub f_h: f64,
    pub f_u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileReport {
    pub per_gate: Vec<GateReport>,
    pub two_qubit_count: usize,
    pub est_fidelity: f64,
}

/// Distinct synthesis problem: one target with one candidate list.
struct Task {
    target: Unitary,
    gates: Vec<(GateKind, f64)>,
    f1q: f64,
    seed: u64,
}

fn fnv(words: impl Iterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn matrix_words(u: &Unitary) -> impl Iterator<Item = u64> + '_ {
    u.matrix()
        .data()
        .iter()
        .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
}

fn candidates(
    device: &DeviceModel,
    iset: &InstructionSet,
    opts: &CompileOptions,
    idx: usize,
    a: usize,
    b: usize,
) -> Result<Vec<(GateKind, f64)>> {
    let edge = device.edge(a, b).ok_or_else(|| {
        Error::Connectivity(format!(
            "op {idx} acts on ({a}, {b}), which is not a device edge"
        ))
    })?;
    match (&iset.members, opts.mode) {
        (Members::Discrete(gates), CompileMode::Exact | CompileMode::Approx) => gates
            .iter()
            .map(|g| {
                edge.fidelity(g).map(|f| (*g, f)).ok_or_else(|| {
                    Error::MissingCalibration(format!(
                        "gate {g} has no fidelity on edge ({}, {}) (op {idx})",
                        edge.a, edge.b
                    ))
                })
            })
            .collect(),
        (Members::Continuous(_), CompileMode::Continuous) => Ok(Vec::new()),
        (Members::Continuous(_), _) => Err(Error::invalid(format!(
            "instruction set {} is a continuous family; use continuous mode",
            iset.name
        ))),
        (Members::Discrete(_), CompileMode::Continuous) => Err(Error::invalid(format!(
            "continuous mode needs a continuous instruction set, {} is discrete",
            iset.name
        ))),
    }
}

fn solve<E: Executor>(
    exec: &E,
    task: &Task,
    iset: &InstructionSet,
    cfg: &OptimizerConfig,
    opts: &CompileOptions,
) -> Result<Decomposition> {
    let cfg = cfg.clone().with_seed(task.seed);
    match (opts.mode, &iset.members) {
        (CompileMode::Approx, _) => {
            decompose_approx_with(exec, &task.target, &task.gates, &cfg, task.f1q)
        }
        (CompileMode::Exact, _) => {
            let mut best: Option<Decomposition> = None;
            for (g, fid) in &task.gates {
                let d = decompose_exact_with(exec, &task.target, *g, &cfg)?;
                let f_h = hardware_fidelity(*fid, d.layers(), task.f1q);
                let d = d.with_hardware_fidelity(f_h);
                let better = match &best {
                    None => true,
                    Some(b) => {
                        d.f_u > b.f_u + 1e-12 || (d.f_u > b.f_u - 1e-12 && d.layers() < b.layers())
                    }
                };
                if better {
                    best = Some(d);
                }
            }
            best.ok_or_else(|| Error::invalid("instruction set has no members"))
        }
        (CompileMode::Continuous, Members::Continuous(family)) => {
            let d = decompose_continuous_with(exec, &task.target, *family, &cfg)?;
            let f_h = hardware_fidelity(opts.family_fidelity, d.layers(), task.f1q);
            Ok(d.with_hardware_fidelity(f_h))
        }
        (CompileMode::Continuous, Members::Discrete(_)) => {
            unreachable!("rejected while building tasks")
        }
    }
}

/// Single-qubit gates waiting to be emitted, merged per qubit.
struct Pending(Vec<Option<M2>>);

impl Pending {
    fn add(&mut self, q: usize, g: M2) {
        self.0[q] = Some(match self.0[q] {
            Some(prev) => mul2(&g, &prev),
            None => g,
        });
    }

    fn flush(&mut self, q: usize, out: &mut Vec<Op>) -> Result<()> {
        if let Some(m) = self.0[q].take() {
            let (params, _) = u3_from_matrix(&m2_to_matrix(&m))?;
            out.push(Op::U3 { q, params });
        }
        Ok(())
    }
}

/// [`compile_circuit_with`] on the calling thread.
pub fn compile_circuit(
    c: &Circuit,
    device: &DeviceModel,
    iset: &InstructionSet,
    cfg: &OptimizerConfig,
    opts: &CompileOptions,
) -> Result<(Circuit, CompileReport)> {
    compile_circuit_with(&Serial, c, device, iset, cfg, opts)
}

/// Replaces every two-qubit unitary of `c` with its best decomposition on the
/// op's edge, then merges adjacent single-qubit gates.
///
/// Identical (target, candidates) problems are solved once; each problem's
/// optimizer seed derives from `cfg.rng_seed` and the target matrix, so the
/// output does not depend on the executor.
pub fn compile_circuit_with<E: Executor>(
    exec: &E,
    c: &Circuit,
    device: &DeviceModel,
    iset: &InstructionSet,
    cfg: &OptimizerConfig,
    opts: &CompileOptions,
) -> Result<(Circuit, CompileReport)> {
    cfg.validate()?;
    if c.qubit_count() > device.qubit_count() {
        return Err(Error::invalid(format!(
            "circuit uses {} qubits but the device has {}",
            c.qubit_count(),
            device.qubit_count()
        )));
    }
    if !(opts.family_fidelity > 0.0 && opts.family_fidelity <= 1.0) {
        return Err(Error::invalid("family fidelity must lie in (0, 1]"));
    }

    let mut tasks: Vec<Task> = Vec::new();
    let mut index: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let mut op_task: Vec<Option<usize>> = Vec::with_capacity(c.ops().len());
    for (idx, op) in c.ops().iter().enumerate() {
        let Op::Unitary2q { a, b, matrix, .. } = op else {
            if let Op::Gate2q { a, b, .. } = op {
                if device.edge(*a, *b).is_none() {
                    return Err(Error::Connectivity(format!(
                        "op {idx} acts on ({a}, {b}), which is not a device edge"
                    )));
                }
            }
            op_task.push(None);
            continue;
        };
        let gates = candidates(device, iset, opts, idx, *a, *b)?;
        let f1q = sqrt(device.single_qubit_fidelity(*a) * device.single_qubit_fidelity(*b));
        let key: Vec<u64> = matrix_words(matrix)
            .chain(gates.iter().flat_map(|(g, f)| {
                let (t, p) = g.fsim_params();
                [
                    u64::from(g.is_swap()),
                    t.to_bits(),
                    p.to_bits(),
                    f.to_bits(),
                ]
            }))
            .chain([f1q.to_bits()])
            .collect();
        let next = tasks.len();
        let t = *index.entry(key).or_insert(next);
        if t == next {
            tasks.push(Task {
                target: matrix.clone(),
                gates,
                f1q,
                seed: seed::child(cfg.rng_seed, fnv(matrix_words(matrix))),
            });
        }
        op_task.push(Some(t));
    }

    let solved = exec.map(tasks.len(), |t| solve(&Serial, &tasks[t], iset, cfg, opts));
    let mut results = Vec::with_capacity(solved.len());
    for r in solved {
        results.push(r?);
    }

    let mut out = Vec::new();
    let mut pending = Pending(alloc::vec![None; c.qubit_count()]);
    let mut per_gate = Vec::new();
    for (idx, (op, task)) in c.ops().iter().zip(&op_task).enumerate() {
        match (op, task) {
            (Op::U3 { q, params }, _) => pending.add(*q, params.m2()),
            (Op::Gate2q { a, b, .. }, _) => {
                pending.flush(*a, &mut out)?;
                pending.flush(*b, &mut out)?;
                out.push(op.clone());
            }
            (Op::Unitary2q { a, b, .. }, Some(t)) => {
                let d = &results[*t];
                let u3 = d.template.u3_params();
                let gates = d.template.layer_gates();
                for k in 0..=d.layers() {
                    pending.add(*a, u3[2 * k].m2());
                    pending.add(*b, u3[2 * k + 1].m2());
                    if k < d.layers() {
                        pending.flush(*a, &mut out)?;
                        pending.flush(*b, &mut out)?;
                        out.push(Op::Gate2q {
                            a: *a,
                            b: *b,
                            gate: gates[k],
                        });
                    }
                }
                per_gate.push(GateReport {
                    op_index: idx,
                    a: *a,
                    b: *b,
                    gate: d.template.gate,
                    layers: d.layers(),
                    f_d: d.f_d,
                    f_h: d.f_h,
                    f_u: d.f_u,
                });
            }
            (Op::Unitary2q { .. }, None) => unreachable!("every two-qubit unitary has a task"),
        }
    }
    for q in 0..c.qubit_count() {
        pending.flush(q, &mut out)?;
    }

    let report = CompileReport {
        two_qubit_count: per_gate.iter().map(|g| g.layers).sum(),
        est_fidelity: per_gate.iter().map(|g| g.f_u).product(),
        per_gate,
    };
    Ok((
        Circuit {
            qubit_count: c.qubit_count(),
            ops: out,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devicemodel::instruction_set;
    use crate::qgates::haar_su4;
    use alloc::vec;

    fn cz_line(n: usize) -> DeviceModel {
        let mut d = DeviceModel::new(n);
        for q in 0..n - 1 {
            d.add_edge(q, q + 1, vec![(GateKind::Cz, 1.0)]).unwrap();
        }
        d
    }

    #[test]
    fn no_two_qubit_ops_is_unchanged() {
        let mut c = Circuit::new(2);
        c.push(Op::U3 {
            q: 0,
            params: U3Params::new(0.3, 0.1, 0.2),
        })
        .unwrap();
        let (out, rep) = compile_circuit(
            &c,
            &cz_line(2),
            &instruction_set("S3").unwrap(),
            &OptimizerConfig::default(),
            &CompileOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.est_fidelity, 1.0);
        assert_eq!(rep.two_qubit_count, 0);
        assert!(verify_circuit(&c, &out).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn exact_qv_uses_three_cz_each() {
        let c = gen_qv(3, 4).unwrap();
        let d = DeviceModel::ring(3, &[(GateKind::Cz, 1.0)]).unwrap();
        let (out, rep) = compile_circuit(
            &c,
            &d,
            &instruction_set("S3").unwrap(),
            &OptimizerConfig::default(),
            &CompileOptions::mode(CompileMode::Exact),
        )
        .unwrap();
        assert!(out.is_compiled());
        assert!(rep.per_gate.iter().all(|g| g.layers == 3));
        assert_eq!(out.hardware_gate_count(), 9);
        assert!(verify_circuit(&c, &out).unwrap() > 1.0 - 3e-5);
    }

    #[test]
    fn errors() {
        let mut c = Circuit::new(3);
        c.push(Op::unitary(0, 2, haar_su4(1))).unwrap();
        let iset = instruction_set("S3").unwrap();
        let cfg = OptimizerConfig::default();
        let e =
            compile_circuit(&c, &cz_line(3), &iset, &cfg, &CompileOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Connectivity(_)));
        let mut c = Circuit::new(2);
        c.push(Op::unitary(0, 1, haar_su4(1))).unwrap();
        let e = compile_circuit(
            &c,
            &cz_line(2),
            &instruction_set("S1").unwrap(),
            &cfg,
            &CompileOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(e, Error::MissingCalibration(_)));
        assert!(Circuit::new(2)
            .push(Op::unitary(1, 1, haar_su4(0)))
            .is_err());
        assert!(Circuit::new(2)
            .push(Op::U3 {
                q: 2,
                params: U3Params::default()
            })
            .is_err());
    }

    #[test]
    fn repeated_targets_share_results() {
        let c = gen_qft(4).unwrap();
        let d = DeviceModel::grid(1, 4, &[(GateKind::Cz, 0.99)]).unwrap();
        let mut full = DeviceModel::new(4);
        for a in 0..4 {
            for b in a + 1..4 {
                full.add_edge(a, b, vec![(GateKind::Cz, 0.99)]).unwrap();
            }
        }
        assert!(compile_circuit(
            &c,
            &d,
            &instruction_set("S3").unwrap(),
            &OptimizerConfig::default(),
            &CompileOptions::default()
        )
        .is_err());
        let (out, rep) = compile_circuit(
            &c,
            &full,
            &instruction_set("S3").unwrap(),
            &OptimizerConfig::default(),
            &CompileOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.per_gate.len(), 6);
        assert!(verify_circuit(&c, &out).unwrap() > 0.9);
    }
}
