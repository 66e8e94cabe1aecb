use gatesynth_core::circuitpass::{Circuit, Op};
use gatesynth_core::{GateKind, U3Params};
use serde::{Deserialize, Serialize};

use super::MatrixJson;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OpFile {
    U3 {
        q: usize,
        params: [f64; 3],
    },
    Unitary2q {
        q: [usize; 2],
        matrix: MatrixJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Gate2q {
        q: [usize; 2],
        gate: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub qubits: usize,
    pub ops: Vec<OpFile>,
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        let ops = c
            .ops()
            .iter()
            .map(|op| match op {
                Op::U3 { q, params } => OpFile::U3 {
                    q: *q,
                    params: [params.alpha, params.beta, params.lambda],
                },
                Op::Unitary2q {
                    a,
                    b,
                    matrix,
                    label,
                } => OpFile::Unitary2q {
                    q: [*a, *b],
                    matrix: MatrixJson::from(matrix.matrix()),
                    label: label.clone(),
                },
                Op::Gate2q { a, b, gate } => OpFile::Gate2q {
                    q: [*a, *b],
                    gate: gate.to_string(),
                },
            })
            .collect();
        CircuitFile {
            qubits: c.qubit_count(),
            ops,
        }
    }
}

impl CircuitFile {
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.qubits);
        for (i, op) in self.ops.iter().enumerate() {
            let ctx = format!("circuit field `ops[{i}]`");
            let op = match op {
                OpFile::U3 { q, params } => Op::U3 {
                    q: *q,
                    params: U3Params::new(params[0], params[1], params[2]),
                },
                OpFile::Unitary2q { q, matrix, label } => Op::Unitary2q {
                    a: q[0],
                    b: q[1],
                    matrix: matrix.to_unitary(&format!("{ctx}.matrix"))?,
                    label: label.clone(),
                },
                OpFile::Gate2q { q, gate } => Op::Gate2q {
                    a: q[0],
                    b: q[1],
                    gate: gate
                        .parse::<GateKind>()
                        .map_err(|e| Error::format(format!("{ctx}.gate"), e))?,
                },
            };
            c.push(op).map_err(|e| Error::format(&ctx, e))?;
        }
        Ok(c)
    }
}

pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    super::from_json::<CircuitFile>(text, "circuit")?.to_circuit()
}

pub fn circuit_to_json(c: &Circuit) -> String {
    super::to_json(&CircuitFile::from(c))
}
