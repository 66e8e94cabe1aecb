//! Numerical synthesis of two-qubit unitaries into layered circuits over
//! fSim/XY-family hardware gates.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, threading and the command line live
//! in the `gatesynth` crate. Work that can be spread over threads goes through
//! the [`Executor`] trait so that a parallel driver can be plugged in without
//! changing results.

#![no_std]

extern crate alloc;

pub mod circuitpass;
pub mod decomp;
pub mod devicemodel;
mod error;
mod exec;
mod math;
pub mod qgates;
pub mod seed;
pub mod sweep;

pub use circuitpass::{
    compile_circuit, compile_circuit_with, gen_fh, gen_qaoa, gen_qft, gen_qv, verify_circuit,
    Circuit, CompileMode, CompileOptions, CompileReport, GateReport, Op,
};
pub use decomp::{
    build_template_unitary, decompose_approx, decompose_approx_with, decompose_continuous,
    decompose_continuous_with, decompose_exact, decompose_exact_with, objective_gradient,
    optimize_fixed, optimize_fixed_with, Decomposition, Family, GradientMode, OptimizerConfig,
    Template, TemplateGate,
};
pub use devicemodel::{
    calibration_cost, instruction_set, instruction_set_names, tradeoff_report,
    CalibrationCostModel, CostEstimate, DeviceModel, InstructionSet, Members, TradeoffRow,
};
pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use qgates::{
    app_unitary, canonicalize_fsim, fsim_matrix, haar_su4, hs_fidelity, u3_matrix, AppKind,
    AppParam, GateKind, Matrix, U3Params, Unitary, C64,
};
pub use sweep::{
    evaluate_point, run_sweep, run_sweep_with, select_gate_shortlist, CellStats, Ensemble,
    SweepResult, SweepSpec,
};
