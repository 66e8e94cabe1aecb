//! Argument definitions and subcommand runners for the `gatesynth` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gatesynth_core::circuitpass::{self, Circuit, CompileMode, CompileOptions};
use gatesynth_core::decomp::{
    self, hardware_fidelity, Decomposition, Family, GradientMode, OptimizerConfig,
};
use gatesynth_core::devicemodel::{
    self, CalibrationCostModel, DeviceModel, InstructionSet, Members,
};
use gatesynth_core::sweep::{self, Ensemble, SweepSpec};
use gatesynth_core::{app_unitary, haar_su4, AppKind, AppParam, Executor, GateKind, Unitary};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{self, read_text, write_text};
use crate::RayonExecutor;

#[derive(Debug, Parser)]
#[command(
    name = "gatesynth",
    version,
    about = "Two-qubit gate synthesis over fSim/XY hardware gates"
)]
pub struct Cli {
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true, env = "GATESYNTH_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Log level: error, warn, info, debug or trace.
    #[arg(long, global = true, env = "GATESYNTH_LOG", default_value = "warn")]
    pub log_level: String,
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON report path. Without it the report goes to stdout and the
    /// summary to stderr.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose one two-qubit unitary.
    Decompose(DecomposeArgs),
    /// Compile a circuit for a device.
    Compile(CompileArgs),
    /// Gate counts over the fSim (θ, φ) grid.
    Sweep(SweepArgs),
    /// Calibration cost of an instruction set on a device.
    CalibrateCost(CalibrateArgs),
    /// Decomposition throughput, serial versus parallel.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
    Continuous,
}

impl From<ModeArg> for CompileMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => CompileMode::Exact,
            ModeArg::Approx => CompileMode::Approx,
            ModeArg::Continuous => CompileMode::Continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GradientArg {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long)]
    pub max_layers: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Infidelity below which a fit counts as exact.
    #[arg(long)]
    pub exact_infidelity: Option<f64>,
    /// Gradient-norm convergence tolerance.
    #[arg(long)]
    pub conv_tol: Option<f64>,
    /// Finite-difference step.
    #[arg(long)]
    pub grad_step: Option<f64>,
    #[arg(long, value_enum)]
    pub gradient: Option<GradientArg>,
    /// Stop restarting once this many restarts agree on the best value
    /// (0 runs every restart).
    #[arg(long)]
    pub consensus: Option<usize>,
}

impl OptimizerArgs {
    pub fn config(&self, seed: u64) -> Result<OptimizerConfig> {
        let mut c = OptimizerConfig::default().with_seed(seed);
        if let Some(v) = self.max_layers {
            c.max_layers = v;
        }
        if let Some(v) = self.restarts {
            c.restarts = v;
        }
        if let Some(v) = self.max_iters {
            c.max_iters = v;
        }
        if let Some(v) = self.exact_infidelity {
            c.exact_infidelity = v;
        }
        if let Some(v) = self.conv_tol {
            c.conv_tol = v;
        }
        if let Some(v) = self.grad_step {
            c.grad_step = v;
        }
        if let Some(v) = self.consensus {
            c.consensus = v;
        }
        if let Some(g) = self.gradient {
            c.gradient = match g {
                GradientArg::Analytic => GradientMode::Analytic,
                GradientArg::FiniteDifference => GradientMode::FiniteDifference,
            };
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// `identity`, `swap`, `qv` (Haar, uses --seed), `qaoa`/`fh-zz`/`fh-xxyy`
    /// (need --angle), `qft` (needs --power), a gate name, or a JSON matrix
    /// file.
    #[arg(long)]
    pub target: String,
    #[arg(long, allow_hyphen_values = true)]
    pub angle: Option<f64>,
    #[arg(long)]
    pub power: Option<u32>,
    /// Hardware gate; repeat for several candidates.
    #[arg(long)]
    pub gate: Vec<String>,
    /// Instruction-set name instead of --gate.
    #[arg(long, conflicts_with = "gate")]
    pub set: Option<String>,
    /// Per-gate fidelity: one value for all gates or one per gate.
    #[arg(long)]
    pub fidelity: Vec<f64>,
    /// Single-qubit gate fidelity.
    #[arg(long, default_value_t = 1.0)]
    pub f1q: f64,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Circuit JSON file.
    #[arg(long, required_unless_present = "generate")]
    pub circuit: Option<PathBuf>,
    /// Built-in benchmark instead of a file: `qv:N`, `qaoa:N`, `qft:N` or
    /// `fh:N` (uses --seed).
    #[arg(long, conflicts_with = "circuit")]
    pub generate: Option<String>,
    /// Device JSON file.
    #[arg(long)]
    pub device: PathBuf,
    #[arg(long)]
    pub set: String,
    #[arg(long, value_enum, default_value = "approx")]
    pub mode: ModeArg,
    /// Gate fidelity assumed on every edge in continuous mode.
    #[arg(long, default_value_t = 1.0)]
    pub family_fidelity: f64,
    /// Where to write the compiled circuit JSON.
    #[arg(long)]
    pub compiled: Option<PathBuf>,
    /// Where to write the per-gate report as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Skip the full-unitary check.
    #[arg(long)]
    pub no_verify: bool,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub ensemble: String,
    /// Grid size as `<theta points>x<phi points>`.
    #[arg(long, default_value = "19x19")]
    pub grid: String,
    /// Ensemble size; defaults to the desk-scale size of the ensemble.
    #[arg(long)]
    pub size: Option<usize>,
    /// Use the full characterization sizes (1000 QV and QAOA members).
    #[arg(long, conflicts_with = "size")]
    pub full_size: bool,
    /// Where to write the heatmap CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Device JSON file.
    #[arg(long, required_unless_present = "topology")]
    pub device: Option<PathBuf>,
    /// Generated topology: `sycamore`, `ring:N`, `grid:RxC` or
    /// `staggered:RxC`.
    #[arg(long, conflicts_with = "device")]
    pub topology: Option<String>,
    /// Number of gate types.
    #[arg(long, required_unless_present = "metrics")]
    pub types: Option<usize>,
    /// JSON map from instruction-set name to metric; produces a tradeoff
    /// table over those sets.
    #[arg(long, conflicts_with = "types")]
    pub metrics: Option<PathBuf>,
    /// Calibration config JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the tradeoff table as CSV.
    #[arg(long, requires = "metrics")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Number of Haar-random targets.
    #[arg(long, default_value_t = 100)]
    pub gates: usize,
    #[arg(long, default_value = "cz")]
    pub gate: String,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

fn parse_gate(s: &str) -> Result<GateKind> {
    Ok(s.parse::<GateKind>()?)
}

fn executor(threads: usize) -> Result<RayonExecutor> {
    RayonExecutor::new(threads).map_err(|e| Error::format("--threads", e))
}

fn emit<T: Serialize>(out: Option<&Path>, report: &T, summary: &str) -> Result<()> {
    let json = formats::to_json(report);
    match out {
        Some(path) => {
            write_text(path, &json)?;
            print!("{summary}");
        }
        None => {
            eprint!("{summary}");
            print!("{json}");
        }
    }
    Ok(())
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Decompose(a) => decompose(cli, a),
        Command::Compile(a) => compile(cli, a),
        Command::Sweep(a) => run_sweep(cli, a),
        Command::CalibrateCost(a) => calibrate(cli, a),
        Command::Bench(a) => bench(cli, a),
    }
}

fn target_unitary(a: &DecomposeArgs, seed: u64) -> Result<Unitary> {
    let need_angle = || {
        a.angle
            .map(AppParam::Angle)
            .ok_or_else(|| Error::format("--target", "this target needs --angle"))
    };
    let kind = match a.target.to_ascii_lowercase().as_str() {
        "identity" => return Ok(Unitary::identity(4)),
        "qv" => return Ok(haar_su4(seed)),
        "swap" => (AppKind::Swap, AppParam::None),
        "qaoa" => (AppKind::QaoaZz, need_angle()?),
        "fh-zz" => (AppKind::FhZz, need_angle()?),
        "fh-xxyy" => (AppKind::FhXxyy, need_angle()?),
        "qft" => (
            AppKind::QftCp,
            AppParam::Power(
                a.power
                    .ok_or_else(|| Error::format("--target", "qft needs --power"))?,
            ),
        ),
        _ => {
            if let Ok(g) = a.target.parse::<GateKind>() {
                return Ok(g.matrix());
            }
            return formats::matrix_from_json(&read_text(Path::new(&a.target))?);
        }
    };
    Ok(app_unitary(kind.0, kind.1)?)
}

fn fidelities(given: &[f64], n: usize) -> Result<Vec<f64>> {
    match given.len() {
        0 => Ok(vec![1.0; n]),
        1 => Ok(vec![given[0]; n]),
        k if k == n => Ok(given.to_vec()),
        k => Err(Error::format(
            "--fidelity",
            format!("got {k} values for {n} gates"),
        )),
    }
}

fn decompose(cli: &Cli, a: &DecomposeArgs) -> Result<()> {
    let cfg = a.opt.config(cli.seed)?;
    let target = target_unitary(a, cli.seed)?;
    let exec = executor(cli.threads)?;
    let set = a
        .set
        .as_deref()
        .map(devicemodel::instruction_set)
        .transpose()?;
    let members = match &set {
        Some(s) => s.members.clone(),
        None if matches!(a.mode, ModeArg::Continuous) => {
            let name = a.gate.first().map_or("fullfsim", String::as_str);
            Members::Continuous(name.parse::<Family>()?)
        }
        None => Members::Discrete(
            a.gate
                .iter()
                .map(|g| parse_gate(g))
                .collect::<Result<_>>()?,
        ),
    };
    let d = match (a.mode, members) {
        (ModeArg::Continuous, Members::Continuous(family)) => {
            let d = decomp::decompose_continuous_with(&exec, &target, family, &cfg)?;
            let f = fidelities(&a.fidelity, 1)?[0];
            let f_h = hardware_fidelity(f, d.layers(), a.f1q);
            d.with_hardware_fidelity(f_h)
        }
        (ModeArg::Continuous, Members::Discrete(_)) | (_, Members::Continuous(_)) => {
            return Err(Error::format(
                "--mode",
                "continuous mode goes with a gate family, and only with one",
            ));
        }
        (mode, Members::Discrete(gates)) => {
            if gates.is_empty() {
                return Err(Error::format(
                    "--gate",
                    "give at least one --gate or a --set",
                ));
            }
            let fids = fidelities(&a.fidelity, gates.len())?;
            let cands: Vec<(GateKind, f64)> = gates.into_iter().zip(fids).collect();
            match mode {
                ModeArg::Approx => {
                    decomp::decompose_approx_with(&exec, &target, &cands, &cfg, a.f1q)?
                }
                _ => best_exact(&exec, &target, &cands, &cfg, a.f1q)?,
            }
        }
    };
    let summary = format!(
        "gate {}\nlayers {}\nf_d {:.9}\nf_h {:.9}\nf_u {:.9}\n",
        d.template.gate,
        d.layers(),
        d.f_d,
        d.f_h,
        d.f_u
    );
    emit(
        cli.out.as_deref(),
        &formats::DecompositionFile::from(&d),
        &summary,
    )
}

fn best_exact<E: Executor>(
    exec: &E,
    target: &Unitary,
    cands: &[(GateKind, f64)],
    cfg: &OptimizerConfig,
    f1q: f64,
) -> Result<Decomposition> {
    let mut best: Option<Decomposition> = None;
    let mut last_err = None;
    for (g, f) in cands {
        match decomp::decompose_exact_with(exec, target, *g, cfg) {
            Ok(d) => {
                let f_h = hardware_fidelity(*f, d.layers(), f1q);
                let d = d.with_hardware_fidelity(f_h);
                if best.as_ref().is_none_or(|b| d.f_u > b.f_u + 1e-12) {
                    best = Some(d);
                }
            }
            Err(e @ gatesynth_core::Error::CapacityExceeded { .. }) => last_err = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one candidate").into())
}

fn generated_circuit(spec: &str, seed: u64) -> Result<Circuit> {
    let ctx = "--generate";
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::format(ctx, "expected <kind>:<qubits>"))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::format(ctx, "qubit count must be an integer"))?;
    Ok(match kind.to_ascii_lowercase().as_str() {
        "qv" => circuitpass::gen_qv(n, seed)?,
        "qaoa" => circuitpass::gen_qaoa(n, seed)?,
        "qft" => circuitpass::gen_qft(n)?,
        "fh" => circuitpass::gen_fh(n, seed)?,
        other => return Err(Error::format(ctx, format!("unknown benchmark {other:?}"))),
    })
}

fn compile(cli: &Cli, a: &CompileArgs) -> Result<()> {
    let cfg = a.opt.config(cli.seed)?;
    let circuit = match (&a.circuit, &a.generate) {
        (Some(path), _) => formats::circuit_from_json(&read_text(path)?)?,
        (None, Some(spec)) => generated_circuit(spec, cli.seed)?,
        (None, None) => unreachable!("clap requires one of --circuit and --generate"),
    };
    let device = formats::device_from_json(&read_text(&a.device)?)?;
    let iset = devicemodel::instruction_set(&a.set)?;
    let opts = CompileOptions {
        mode: a.mode.into(),
        family_fidelity: a.family_fidelity,
    };
    let exec = executor(cli.threads)?;
    let (compiled, report) =
        circuitpass::compile_circuit_with(&exec, &circuit, &device, &iset, &cfg, &opts)?;
    let verification = if !a.no_verify && circuit.qubit_count() <= circuitpass::MAX_VERIFY_QUBITS {
        Some(circuitpass::verify_circuit(&circuit, &compiled)?)
    } else {
        None
    };
    if let Some(path) = &a.compiled {
        write_text(path, &formats::circuit_to_json(&compiled))?;
    }
    if let Some(path) = &a.csv {
        write_text(path, &formats::compile_report_csv(&report)?)?;
    }
    let mut summary = String::new();
    for g in &report.per_gate {
        summary += &format!(
            "op {} ({}, {}): {} x{} f_u {:.6}\n",
            g.op_index, g.a, g.b, g.gate, g.layers, g.f_u
        );
    }
    summary += &format!(
        "two-qubit gates {}\nestimated fidelity {:.6}\n",
        report.two_qubit_count, report.est_fidelity
    );
    if let Some(v) = verification {
        summary += &format!("verification fidelity {v:.9}\n");
    }
    emit(
        cli.out.as_deref(),
        &formats::compile_report_file(&report, verification),
        &summary,
    )
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (t, p) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::format("--grid", "expected <theta>x<phi>"))?;
    let n = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::format("--grid", format!("bad size {v:?}")))
    };
    Ok((n(t)?, n(p)?))
}

fn run_sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let cfg = a.opt.config(cli.seed)?;
    let ensemble: Ensemble = a.ensemble.parse()?;
    let (theta_points, phi_points) = parse_grid(&a.grid)?;
    let spec = SweepSpec {
        theta_points,
        phi_points,
        ensemble,
        ensemble_size: match (a.size, a.full_size) {
            (Some(n), _) => n,
            (None, true) => ensemble.full_size(),
            (None, false) => ensemble.default_size(),
        },
        seed: cli.seed,
    };
    let exec = executor(cli.threads)?;
    log::info!(
        "sweeping {} cells x {} members on {} threads",
        spec.cell_count(),
        spec.ensemble_size,
        exec.width()
    );
    let start = Instant::now();
    let mut result = sweep::run_sweep_with(&exec, &spec, &cfg)?;
    result.wall_time_secs = Some(start.elapsed().as_secs_f64());
    if let Some(path) = &a.csv {
        write_text(path, &formats::sweep_csv(&result)?)?;
    }
    let failures: usize = result.cells.iter().map(|c| c.failures).sum();
    let summary = format!(
        "{} cells, {} failed decompositions, {:.1} s\n",
        result.cells.len(),
        failures,
        result.wall_time_secs.unwrap_or_default()
    );
    emit(cli.out.as_deref(), &formats::sweep_file(&result), &summary)
}

fn parse_topology(s: &str) -> Result<DeviceModel> {
    let ctx = "--topology";
    let dims = |v: &str| -> Result<(usize, usize)> {
        let (r, c) = v
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::format(ctx, "expected <rows>x<cols>"))?;
        let p = |x: &str| {
            x.parse::<usize>()
                .map_err(|_| Error::format(ctx, format!("bad size {x:?}")))
        };
        Ok((p(r)?, p(c)?))
    };
    let lower = s.to_ascii_lowercase();
    let d = if lower == "sycamore" {
        DeviceModel::sycamore_like(&[])?
    } else if let Some(n) = lower.strip_prefix("ring:") {
        DeviceModel::ring(
            n.parse().map_err(|_| Error::format(ctx, "bad ring size"))?,
            &[],
        )?
    } else if let Some(v) = lower.strip_prefix("grid:") {
        let (r, c) = dims(v)?;
        DeviceModel::grid(r, c, &[])?
    } else if let Some(v) = lower.strip_prefix("staggered:") {
        let (r, c) = dims(v)?;
        DeviceModel::staggered_grid(r, c, &[])?
    } else {
        return Err(Error::format(ctx, format!("unknown topology {s:?}")));
    };
    Ok(d)
}

#[derive(Serialize)]
struct CostReport {
    edges: usize,
    types: usize,
    circuits: u64,
    hours: f64,
}

#[derive(Serialize)]
struct TradeoffReport {
    edges: usize,
    rows: Vec<formats::TradeoffRowFile>,
}

fn calibrate(cli: &Cli, a: &CalibrateArgs) -> Result<()> {
    let device = match (&a.device, &a.topology) {
        (Some(path), _) => formats::device_from_json(&read_text(path)?)?,
        (None, Some(t)) => parse_topology(t)?,
        (None, None) => unreachable!("clap requires one of --device and --topology"),
    };
    let model = match &a.config {
        Some(path) => formats::calibration_from_json(&read_text(path)?)?,
        None => CalibrationCostModel::default(),
    };
    if let Some(types) = a.types {
        let cost = devicemodel::calibration_cost(&model, &device, types)?;
        let summary = format!(
            "{} edges x {} types: {} circuits, {:.1} hours\n",
            device.edge_count(),
            types,
            cost.circuits,
            cost.hours
        );
        let report = CostReport {
            edges: device.edge_count(),
            types,
            circuits: cost.circuits,
            hours: cost.hours,
        };
        return emit(cli.out.as_deref(), &report, &summary);
    }
    let path = a
        .metrics
        .as_ref()
        .expect("clap requires --types or --metrics");
    let metrics: BTreeMap<String, f64> = formats::from_json(&read_text(path)?, "metrics")?;
    let sets: Vec<InstructionSet> = metrics
        .keys()
        .map(|n| devicemodel::instruction_set(n))
        .collect::<std::result::Result<_, _>>()?;
    // registry names are canonical; re-key metrics the same way
    let metrics: BTreeMap<String, f64> = sets
        .iter()
        .zip(metrics.values())
        .map(|(s, m)| (s.name.clone(), *m))
        .collect();
    let rows = devicemodel::tradeoff_report(&model, &device, &sets, &metrics)?;
    if let Some(csv) = &a.csv {
        write_text(csv, &formats::tradeoff_csv(&rows)?)?;
    }
    let mut summary = String::new();
    for r in &rows {
        match r.circuits {
            Some(c) => {
                summary += &format!(
                    "{}: {} types, {} circuits, metric {}\n",
                    r.set,
                    r.types.unwrap_or(0),
                    c,
                    r.metric
                )
            }
            None => summary += &format!("{}: unbounded, metric {}\n", r.set, r.metric),
        }
    }
    let report = TradeoffReport {
        edges: device.edge_count(),
        rows: formats::tradeoff_file(&rows),
    };
    emit(cli.out.as_deref(), &report, &summary)
}

#[derive(Serialize)]
struct BenchReport {
    gates: usize,
    gate: String,
    threads: usize,
    serial_secs: f64,
    parallel_secs: f64,
    serial_rate: f64,
    parallel_rate: f64,
    speedup: f64,
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<()> {
    let cfg = a.opt.config(cli.seed)?;
    let gate = parse_gate(&a.gate)?;
    let targets: Vec<Unitary> = (0..a.gates as u64)
        .map(|i| haar_su4(gatesynth_core::seed::child(cli.seed, i)))
        .collect();
    let time = |exec: &RayonExecutor| -> Result<f64> {
        let start = Instant::now();
        let results = exec.map(targets.len(), |i| {
            decomp::decompose_exact(&targets[i], gate, &cfg).map(|d| d.layers())
        });
        for r in results {
            match r {
                Ok(_) | Err(gatesynth_core::Error::CapacityExceeded { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(start.elapsed().as_secs_f64())
    };
    let parallel = executor(cli.threads)?;
    let threads = parallel.width();
    let serial_secs = time(&executor(1)?)?;
    let parallel_secs = time(&parallel)?;
    let speedup = serial_secs / parallel_secs;
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let expected = threads.min(cores) as f64;
    if speedup < 0.75 * expected {
        log::warn!("speedup {speedup:.2} on {threads} threads is below 75% of linear ({cores} cores available)");
    }
    let report = BenchReport {
        gates: a.gates,
        gate: gate.to_string(),
        threads,
        serial_secs,
        parallel_secs,
        serial_rate: a.gates as f64 / serial_secs,
        parallel_rate: a.gates as f64 / parallel_secs,
        speedup,
    };
    let summary = format!(
        "{} decompositions: {:.1}/s serial, {:.1}/s on {} threads, speedup {:.2}\n",
        a.gates, report.serial_rate, report.parallel_rate, threads, speedup
    );
    emit(cli.out.as_deref(), &report, &summary)
}
