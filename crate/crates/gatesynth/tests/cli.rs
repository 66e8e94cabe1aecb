use std::path::Path;
use std::process::{Command, Output};

use gatesynth::formats::{
    circuit_from_json, decomposition_from_json, CompileReportFile, SweepFile,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatesynth"))
        .args(args)
        .env("GATESYNTH_THREADS", "2")
        .env_remove("GATESYNTH_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const TRIANGLE: &str = r#"{"qubits": 3, "edges": [
    {"a": 0, "b": 1, "gates": {"cz": 0.99, "iswap": 0.98}},
    {"a": 1, "b": 2, "gates": {"cz": 0.97, "iswap": 0.99}},
    {"a": 0, "b": 2, "gates": {"cz": 0.98, "iswap": 0.97}}]}"#;

#[test]
fn decompose_swap_with_swap_like_fsim() {
    let o = run(&[
        "decompose",
        "--target",
        "swap",
        "--gate",
        "fsim:1.5707963267948966,3.141592653589793",
    ]);
    assert!(o.status.success());
    let d = decomposition_from_json(&stdout(&o)).unwrap();
    assert_eq!(d.layers(), 1);
    assert!(d.f_d > 1.0 - 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("layers 1"));
}

#[test]
fn decompose_identity_needs_no_layers() {
    let o = run(&["decompose", "--target", "identity", "--gate", "syc"]);
    assert!(o.status.success());
    assert_eq!(decomposition_from_json(&stdout(&o)).unwrap().layers(), 0);
}

#[test]
fn decompose_approx_prefers_the_better_gate() {
    let o = run(&[
        "decompose",
        "--target",
        "qv",
        "--seed",
        "3",
        "--gate",
        "cz",
        "--gate",
        "sqiswap",
        "--fidelity",
        "0.999",
        "--fidelity",
        "0.9",
        "--mode",
        "approx",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d = decomposition_from_json(&stdout(&o)).unwrap();
    assert_eq!(d.template.gate.to_string(), "cz");
}

#[test]
fn compile_writes_circuit_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let device = write(dir.path(), "device.json", TRIANGLE);
    let compiled = dir.path().join("compiled.json");
    let csv = dir.path().join("report.csv");
    let report = dir.path().join("report.json");
    let o = run(&[
        "compile",
        "--generate",
        "qv:3",
        "--device",
        &device,
        "--set",
        "R1",
        "--seed",
        "5",
        "--compiled",
        compiled.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "-o",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: CompileReportFile =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let circuit = circuit_from_json(&std::fs::read_to_string(&compiled).unwrap()).unwrap();
    assert!(circuit.is_compiled());
    assert_eq!(circuit.hardware_gate_count(), rep.two_qubit_count);
    let v = rep.verification_fidelity.unwrap();
    let fd: f64 = rep.per_gate.iter().map(|g| g.f_d).product();
    assert!(v > 0.0 && v <= 1.0 + 1e-9 && v > fd - 0.2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("op_index,a,b,gate,layers,f_d,f_h,f_u"));
    assert_eq!(text.lines().count(), rep.per_gate.len() + 1);
}

#[test]
fn compile_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let device = write(dir.path(), "device.json", TRIANGLE);
    let args = [
        "compile",
        "--generate",
        "qaoa:3",
        "--device",
        &device,
        "--set",
        "R1",
        "--no-verify",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn sweep_csv_has_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("swap.csv");
    let o = run(&[
        "sweep",
        "--ensemble",
        "swap",
        "--grid",
        "4x5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let file: SweepFile = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(file.cells.len(), 20);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 21);
}

#[test]
fn calibrate_cost_on_generated_topology() {
    let o = run(&["calibrate-cost", "--topology", "sycamore", "--types", "10"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["edges"], 88);
    assert_eq!(v["circuits"], 8_800_000);
    assert_eq!(v["hours"], 1760.0);
}

#[test]
fn calibrate_tradeoff_table() {
    let dir = tempfile::tempdir().unwrap();
    let metrics = write(
        dir.path(),
        "metrics.json",
        r#"{"G1": 2.5, "G3": 2.1, "FullFSim": 1.6}"#,
    );
    let config = write(
        dir.path(),
        "cal.json",
        r#"{"hours_per_type_per_pair": 1.0}"#,
    );
    let o = run(&[
        "calibrate-cost",
        "--topology",
        "ring:5",
        "--metrics",
        &metrics,
        "--config",
        &config,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["hours"], 10.0);
    assert_eq!(rows[2]["hours"], "unbounded");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // missing input file
    let o = run(&[
        "compile",
        "--generate",
        "qv:3",
        "--device",
        "/nonexistent.json",
        "--set",
        "G1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    // malformed device
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"qubits": 2, "edges": [{"a": 0, "b": 1, "gates": {"cz": "high"}}]}"#,
    );
    let o = run(&[
        "compile",
        "--generate",
        "qv:2",
        "--device",
        &bad,
        "--set",
        "G1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edges[0].gates.cz"));
    // layer budget too small
    let o = run(&[
        "decompose",
        "--target",
        "qv",
        "--gate",
        "cz",
        "--max-layers",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    // gate type absent from the edge
    let device = write(dir.path(), "device.json", TRIANGLE);
    let o = run(&[
        "compile",
        "--generate",
        "qv:3",
        "--device",
        &device,
        "--set",
        "S1",
    ]);
    assert_eq!(o.status.code(), Some(4));
    // unwritable output
    let o = run(&[
        "decompose",
        "--target",
        "swap",
        "--gate",
        "cz",
        "-o",
        "/nonexistent/dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(5));
    // qubit pair without an edge
    let sparse = write(
        dir.path(),
        "sparse.json",
        r#"{"qubits": 3, "edges": [{"a": 0, "b": 1, "gates": {"cz": 0.99}}]}"#,
    );
    let o = run(&[
        "compile",
        "--generate",
        "qv:3",
        "--device",
        &sparse,
        "--set",
        "S3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    // unknown instruction set
    let o = run(&[
        "compile",
        "--generate",
        "qv:3",
        "--device",
        &device,
        "--set",
        "Z9",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
