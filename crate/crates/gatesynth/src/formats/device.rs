use gatesynth_core::devicemodel::DeviceModel;
use gatesynth_core::GateKind;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub a: usize,
    pub b: usize,
    /// Gate name (`cz`, `fsim:θ,φ`, ...) to per-gate fidelity.
    pub gates: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceFile {
    pub qubits: usize,
    pub edges: Vec<EdgeFile>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub single_qubit_fidelity: IndexMap<String, f64>,
}

impl DeviceFile {
    pub fn to_device(&self) -> Result<DeviceModel> {
        let mut d = DeviceModel::new(self.qubits);
        for (i, e) in self.edges.iter().enumerate() {
            let mut gates = Vec::with_capacity(e.gates.len());
            for (name, f) in &e.gates {
                let g: GateKind = name.parse().map_err(|err| {
                    Error::format(format!("device field `edges[{i}].gates.{name}`"), err)
                })?;
                gates.push((g, *f));
            }
            d.add_edge(e.a, e.b, gates)
                .map_err(|err| Error::format(format!("device field `edges[{i}]`"), err))?;
        }
        for (q, f) in &self.single_qubit_fidelity {
            let ctx = format!("device field `single_qubit_fidelity.{q}`");
            let idx: usize = q
                .parse()
                .map_err(|_| Error::format(&ctx, "key must be a qubit index"))?;
            d.set_single_qubit_fidelity(idx, *f)
                .map_err(|err| Error::format(&ctx, err))?;
        }
        Ok(d)
    }
}

impl From<&DeviceModel> for DeviceFile {
    fn from(d: &DeviceModel) -> Self {
        DeviceFile {
            qubits: d.qubit_count(),
            edges: d
                .edges()
                .iter()
                .map(|e| EdgeFile {
                    a: e.a,
                    b: e.b,
                    gates: e.gates.iter().map(|(g, f)| (g.to_string(), *f)).collect(),
                })
                .collect(),
            single_qubit_fidelity: d
                .single_qubit_fidelities()
                .iter()
                .map(|(q, f)| (q.to_string(), *f))
                .collect(),
        }
    }
}

pub fn device_from_json(text: &str) -> Result<DeviceModel> {
    super::from_json::<DeviceFile>(text, "device")?.to_device()
}

pub fn device_to_json(d: &DeviceModel) -> String {
    super::to_json(&DeviceFile::from(d))
}
