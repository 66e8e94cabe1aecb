use gatesynth_core::decomp::{Decomposition, Family, Template, TemplateGate};
use gatesynth_core::GateKind;
use serde::{Deserialize, Serialize};

use super::MatrixJson;
use crate::error::{Error, Result};

/// A fixed gate carries `name`, `theta` and `phi`; a continuous family
/// carries `family` and per-layer angles in `layer_gates`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerAngles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub target: MatrixJson,
    pub gate: GateFile,
    pub layers: usize,
    /// One `[α, β, λ]` per qubit per layer in application order, high qubit
    /// first.
    pub u3_params: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layer_gates: Vec<LayerAngles>,
    pub f_d: f64,
    pub f_h: f64,
    pub f_u: f64,
}

impl From<&Decomposition> for DecompositionFile {
    fn from(d: &Decomposition) -> Self {
        let t = &d.template;
        let (gate, layer_gates) = match t.gate {
            TemplateGate::Fixed(g) => {
                let (theta, phi) = g.fsim_params();
                (
                    GateFile {
                        name: Some(g.to_string()),
                        family: None,
                        theta: Some(theta),
                        phi: Some(phi),
                    },
                    Vec::new(),
                )
            }
            TemplateGate::Free(f) => (
                GateFile {
                    name: None,
                    family: Some(f.to_string()),
                    theta: None,
                    phi: None,
                },
                t.layer_gates()
                    .iter()
                    .map(|g| {
                        let (theta, phi) = g.fsim_params();
                        LayerAngles { theta, phi }
                    })
                    .collect(),
            ),
        };
        DecompositionFile {
            target: MatrixJson::from(d.target.matrix()),
            gate,
            layers: t.layers,
            u3_params: t
                .u3_params()
                .iter()
                .map(|p| [p.alpha, p.beta, p.lambda])
                .collect(),
            layer_gates,
            f_d: d.f_d,
            f_h: d.f_h,
            f_u: d.f_u,
        }
    }
}

impl DecompositionFile {
    pub fn to_decomposition(&self) -> Result<Decomposition> {
        let ctx = "decomposition field `gate`";
        let gate = match (&self.gate.name, &self.gate.family) {
            (Some(name), None) => {
                TemplateGate::Fixed(name.parse().map_err(|e| Error::format(ctx, e))?)
            }
            (None, Some(family)) => TemplateGate::Free(
                family
                    .parse::<Family>()
                    .map_err(|e| Error::format(ctx, e))?,
            ),
            (None, None) => match (self.gate.theta, self.gate.phi) {
                (Some(theta), Some(phi)) => TemplateGate::Fixed(GateKind::FSim { theta, phi }),
                _ => {
                    return Err(Error::format(
                        ctx,
                        "needs `name`, `family`, or `theta` and `phi`",
                    ))
                }
            },
            (Some(_), Some(_)) => {
                return Err(Error::format(ctx, "`name` and `family` are exclusive"))
            }
        };
        let mut params: Vec<f64> = self.u3_params.iter().flatten().copied().collect();
        if let TemplateGate::Free(_) = gate {
            if self.layer_gates.len() != self.layers {
                return Err(Error::format(
                    "decomposition field `layer_gates`",
                    format!(
                        "expected {} entries, got {}",
                        self.layers,
                        self.layer_gates.len()
                    ),
                ));
            }
            params.extend(self.layer_gates.iter().flat_map(|l| [l.theta, l.phi]));
        }
        let template = Template::new(self.layers, gate, params)
            .map_err(|e| Error::format("decomposition field `u3_params`", e))?;
        Ok(Decomposition {
            target: self.target.to_unitary("decomposition field `target`")?,
            template,
            f_d: self.f_d,
            f_h: self.f_h,
            f_u: self.f_u,
        })
    }
}

pub fn decomposition_to_json(d: &Decomposition) -> String {
    super::to_json(&DecompositionFile::from(d))
}

pub fn decomposition_from_json(text: &str) -> Result<Decomposition> {
    super::from_json::<DecompositionFile>(text, "decomposition")?.to_decomposition()
}
