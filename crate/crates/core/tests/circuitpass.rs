use gatesynth_core::circuitpass::{
    compile_circuit, gen_qaoa, gen_qft, gen_qv, verify_circuit, Circuit, CompileMode,
    CompileOptions, Op,
};
use gatesynth_core::decomp::{OptimizerConfig, TemplateGate};
use gatesynth_core::devicemodel::{instruction_set, DeviceModel, Members};
use gatesynth_core::qgates::{haar_su4, GateKind, U3Params};
use gatesynth_core::Error;

fn all_to_all(n: usize, gates: &[(GateKind, f64)]) -> DeviceModel {
    let mut d = DeviceModel::new(n);
    for a in 0..n {
        for b in a + 1..n {
            d.add_edge(a, b, gates.to_vec()).unwrap();
        }
    }
    d
}

fn check_compiled(out: &Circuit, device: &DeviceModel, set: &str) {
    let iset = instruction_set(set).unwrap();
    let Members::Discrete(members) = &iset.members else {
        panic!("discrete set expected")
    };
    for op in out.ops() {
        match op {
            Op::U3 { .. } => {}
            Op::Gate2q { a, b, gate } => {
                assert!(members.iter().any(|m| m.same_gate(gate)));
                assert!(device.fidelity(*a, *b, gate).is_some());
            }
            Op::Unitary2q { .. } => panic!("compiled circuit kept an application unitary"),
        }
    }
}

#[test]
fn exact_compilation_verifies() {
    let device = all_to_all(3, &[(GateKind::Cz, 1.0), (GateKind::Syc, 1.0)]);
    let cfg = OptimizerConfig::default();
    for s in 0..20 {
        let c = gen_qv(3, s).unwrap();
        let g = c.two_qubit_unitary_count() as f64;
        let (out, rep) = compile_circuit(
            &c,
            &device,
            &instruction_set("S3").unwrap(),
            &cfg,
            &CompileOptions::mode(CompileMode::Exact),
        )
        .unwrap();
        check_compiled(&out, &device, "S3");
        assert_eq!(rep.two_qubit_count, 9);
        let v = verify_circuit(&c, &out).unwrap();
        assert!(v >= 1.0 - 10.0 * g * cfg.exact_infidelity, "seed {s}: {v}");
    }
}

#[test]
fn est_fidelity_is_product_of_per_gate_values() {
    let device = all_to_all(4, &[(GateKind::Cz, 0.97), (GateKind::Iswap, 0.96)]);
    let c = gen_qaoa(4, 2).unwrap();
    let (out, rep) = compile_circuit(
        &c,
        &device,
        &instruction_set("R1").unwrap(),
        &OptimizerConfig::default(),
        &CompileOptions::default(),
    )
    .unwrap();
    check_compiled(&out, &device, "R1");
    let prod: f64 = rep.per_gate.iter().map(|g| g.f_u).product();
    assert!((prod - rep.est_fidelity).abs() < 1e-12);
    assert_eq!(
        rep.two_qubit_count,
        rep.per_gate.iter().map(|g| g.layers).sum::<usize>()
    );
    assert!(rep.est_fidelity > 0.0 && rep.est_fidelity <= 1.0);
    assert!(
        verify_circuit(&c, &out).unwrap()
            > rep.per_gate.iter().map(|g| g.f_d).product::<f64>() - 0.1
    );
}

#[test]
fn more_gate_types_never_hurt() {
    let gates = [
        (GateKind::Cz, 0.96),
        (GateKind::Iswap, 0.96),
        (GateKind::SqrtIswap, 0.96),
    ];
    let device = all_to_all(3, &gates);
    let cfg = OptimizerConfig::default();
    for s in 0..20 {
        let c = gen_qv(3, 100 + s).unwrap();
        let small = compile_circuit(
            &c,
            &device,
            &instruction_set("R1").unwrap(),
            &cfg,
            &CompileOptions::default(),
        )
        .unwrap()
        .1;
        let big = compile_circuit(
            &c,
            &device,
            &instruction_set("R2").unwrap(),
            &cfg,
            &CompileOptions::default(),
        )
        .unwrap()
        .1;
        assert!(big.est_fidelity >= small.est_fidelity - 1e-12, "seed {s}");
    }
}

#[test]
fn continuous_mode_uses_family_fidelity() {
    let device = all_to_all(2, &[]);
    let mut c = Circuit::new(2);
    c.push(Op::unitary(0, 1, haar_su4(5))).unwrap();
    let opts = CompileOptions {
        mode: CompileMode::Continuous,
        family_fidelity: 0.9,
    };
    let (out, rep) = compile_circuit(
        &c,
        &device,
        &instruction_set("FullFSim").unwrap(),
        &OptimizerConfig::default(),
        &opts,
    )
    .unwrap();
    assert_eq!(
        rep.per_gate[0].gate,
        TemplateGate::Free(gatesynth_core::decomp::Family::FullFSim)
    );
    assert_eq!(rep.per_gate[0].layers, 2);
    assert!((rep.per_gate[0].f_h - 0.81).abs() < 1e-12);
    assert!(verify_circuit(&c, &out).unwrap() > 1.0 - 1e-5);
    let e = compile_circuit(
        &c,
        &device,
        &instruction_set("FullFSim").unwrap(),
        &OptimizerConfig::default(),
        &CompileOptions::default(),
    );
    assert!(matches!(e, Err(Error::InvalidArgument(_))));
}

#[test]
fn single_qubit_gates_are_merged() {
    let device = all_to_all(2, &[(GateKind::Cz, 1.0)]);
    let mut c = Circuit::new(2);
    for k in 0..5 {
        c.push(Op::U3 {
            q: 0,
            params: U3Params::new(0.1 * k as f64, 0.2, 0.3),
        })
        .unwrap();
    }
    c.push(Op::Gate2q {
        a: 0,
        b: 1,
        gate: GateKind::Cz,
    })
    .unwrap();
    let (out, _) = compile_circuit(
        &c,
        &device,
        &instruction_set("S3").unwrap(),
        &OptimizerConfig::default(),
        &CompileOptions::default(),
    )
    .unwrap();
    assert_eq!(out.ops().len(), 2);
    assert!(verify_circuit(&c, &out).unwrap() > 1.0 - 1e-12);
}

#[test]
fn verification_oracles() {
    let a = gen_qv(3, 1).unwrap();
    assert!((verify_circuit(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    // independent Haar circuits overlap like random unitaries: |Tr|/8 ≈ 1/8
    let b = gen_qv(3, 2).unwrap();
    assert!(verify_circuit(&a, &b).unwrap() < 0.9);
    let big = Circuit::new(13);
    assert!(matches!(
        verify_circuit(&big, &big),
        Err(Error::CapacityExceeded { .. })
    ));
    assert!(verify_circuit(&gen_qft(3).unwrap(), &Circuit::new(4)).is_err());
}
