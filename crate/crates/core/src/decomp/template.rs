use alloc::vec;
use alloc::vec::Vec;

use super::{Family, TemplateGate};
use crate::error::{Error, Result};
use crate::qgates::gates::{fsim_grad, fsim_m4, u3_grad, u3_m2};
use crate::qgates::small::{
    adj_mul4, contract_high, contract_low, ident4, inner2, inner4, kron2, m4_to_matrix, mul4,
    mul_adj4, to_m4, M2, M4,
};
use crate::qgates::{GateKind, U3Params, Unitary};

/// A layered circuit `[U3⊗U3] · (G · [U3⊗U3])^layers`.
///
/// Parameters are laid out as `6·(layers+1)` single-qubit angles, one
/// `(α, β, λ)` triple per qubit per layer starting with the layer applied
/// first and the high qubit, followed in free-gate mode by `(θ_k, φ_k)` for
/// each two-qubit layer in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub layers: usize,
    pub gate: TemplateGate,
    pub params: Vec<f64>,
}

impl Template {
    pub fn param_len(layers: usize, gate: &TemplateGate) -> usize {
        6 * (layers + 1)
            + match gate {
                TemplateGate::Fixed(_) => 0,
                TemplateGate::Free(_) => 2 * layers,
            }
    }

    pub fn new(layers: usize, gate: TemplateGate, params: Vec<f64>) -> Result<Self> {
        let expected = Self::param_len(layers, &gate);
        if params.len() != expected {
            return Err(Error::invalid(alloc::format!(
                "template with {layers} layers needs {expected} parameters, got {}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("template parameters must be finite"));
        }
        Ok(Template {
            layers,
            gate,
            params,
        })
    }

    /// Single-qubit rotations in application order: layer 0 high qubit,
    /// layer 0 low qubit, layer 1 high qubit, ...
    pub fn u3_params(&self) -> Vec<U3Params> {
        self.params[..6 * (self.layers + 1)]
            .chunks_exact(3)
            .map(|c| U3Params::new(c[0], c[1], c[2]))
            .collect()
    }

    /// The two-qubit gate of each layer in application order.
    pub fn layer_gates(&self) -> Vec<GateKind> {
        match self.gate {
            TemplateGate::Fixed(g) => vec![g; self.layers],
            TemplateGate::Free(family) => {
                let base = 6 * (self.layers + 1);
                (0..self.layers)
                    .map(|k| {
                        let theta = self.params[base + 2 * k];
                        let phi = match family {
                            Family::FullFSim => self.params[base + 2 * k + 1],
                            Family::FullXy => 0.0,
                        };
                        GateKind::FSim { theta, phi }
                    })
                    .collect()
            }
        }
    }

    pub fn unitary(&self) -> Unitary {
        let shape = Shape::new(self.layers, &self.gate);
        Unitary::from_matrix_unchecked(m4_to_matrix(&shape.product(&self.params)))
    }
}

/// Reconstructs the matrix a template represents (rightmost layer applied
/// first).
pub fn build_template_unitary(t: &Template) -> Result<Unitary> {
    let expected = Template::param_len(t.layers, &t.gate);
    if t.params.len() != expected {
        return Err(Error::invalid(alloc::format!(
            "template with {} layers needs {expected} parameters, got {}",
            t.layers,
            t.params.len()
        )));
    }
    Ok(t.unitary())
}

#[derive(Debug, Clone, Copy)]
enum GateSource {
    Fixed(M4),
    Free(Family),
}

/// Template structure without parameter values.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Shape {
    layers: usize,
    gate: GateSource,
}

impl Shape {
    pub(crate) fn new(layers: usize, gate: &TemplateGate) -> Self {
        let gate = match gate {
            TemplateGate::Fixed(g) => GateSource::Fixed(g.m4()),
            TemplateGate::Free(f) => GateSource::Free(*f),
        };
        Shape { layers, gate }
    }

    pub(crate) fn n_params(&self) -> usize {
        6 * (self.layers + 1)
            + match self.gate {
                GateSource::Fixed(_) => 0,
                GateSource::Free(_) => 2 * self.layers,
            }
    }

    fn gate_angles(&self, x: &[f64], k: usize) -> (f64, f64) {
        let base = 6 * (self.layers + 1);
        let theta = x[base + 2 * k];
        let phi = match self.gate {
            GateSource::Free(Family::FullXy) => 0.0,
            _ => x[base + 2 * k + 1],
        };
        (theta, phi)
    }

    fn gate(&self, x: &[f64], k: usize) -> M4 {
        match self.gate {
            GateSource::Fixed(m) => m,
            GateSource::Free(_) => {
                let (t, p) = self.gate_angles(x, k);
                fsim_m4(t, p)
            }
        }
    }

    fn local(x: &[f64], k: usize) -> (M2, M2) {
        let p = &x[6 * k..6 * k + 6];
        (u3_m2(p[0], p[1], p[2]), u3_m2(p[3], p[4], p[5]))
    }

    pub(crate) fn product(&self, x: &[f64]) -> M4 {
        let (a, b) = Self::local(x, 0);
        let mut u = kron2(&a, &b);
        for k in 0..self.layers {
            u = mul4(&self.gate(x, k), &u);
            let (a, b) = Self::local(x, k + 1);
            u = mul4(&kron2(&a, &b), &u);
        }
        u
    }
}

/// `1 - |Tr(U(x)† U_t)| / 4` for a fixed target.
pub(crate) struct Objective {
    shape: Shape,
    target: M4,
}

impl Objective {
    pub(crate) fn new(shape: Shape, target: &Unitary) -> Self {
        Objective {
            shape,
            target: to_m4(target.matrix()),
        }
    }

    pub(crate) fn n_params(&self) -> usize {
        self.shape.n_params()
    }

    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        let u = self.shape.product(x);
        1.0 - inner4(&u, &self.target).norm() / 4.0
    }

    /// Objective and its exact gradient.
    ///
    /// With factors `f_0 … f_{m-1}` in application order, `U = L_j f_j R_j`
    /// where `R_j = f_{j-1}⋯f_0` and `L_j = f_{m-1}⋯f_{j+1}`, so
    /// `Tr(U† U_t) = Tr(f_j† M_j)` with `M_j = L_j† U_t R_j†`. Derivatives of
    /// the trace are then `Tr(∂f_j† M_j)`.
    pub(crate) fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let layers = self.shape.layers;
        let m = 2 * layers + 1;
        let mut locals: Vec<(M2, M2)> = Vec::with_capacity(layers + 1);
        let mut factors: Vec<M4> = Vec::with_capacity(m);
        for k in 0..=layers {
            let (a, b) = Shape::local(x, k);
            factors.push(kron2(&a, &b));
            locals.push((a, b));
            if k < layers {
                factors.push(self.shape.gate(x, k));
            }
        }

        // rights[j] = f_{j-1} ⋯ f_0
        let mut rights: Vec<M4> = Vec::with_capacity(m);
        rights.push(ident4());
        for j in 1..m {
            let next = mul4(&factors[j - 1], &rights[j - 1]);
            rights.push(next);
        }

        let mut dtr = vec![crate::qgates::small::ZERO; x.len()];
        let mut q = self.target;
        let mut trace = crate::qgates::small::ZERO;
        for j in (0..m).rev() {
            if j + 1 < m {
                q = adj_mul4(&factors[j + 1], &q);
            }
            let mj = mul_adj4(&q, &rights[j]);
            if j == m - 1 {
                trace = inner4(&factors[j], &mj);
            }
            if j % 2 == 0 {
                let k = j / 2;
                let (a, b) = &locals[k];
                let p = &x[6 * k..6 * k + 6];
                let na = contract_low(&mj, b);
                let nb = contract_high(&mj, a);
                let da = u3_grad(p[0], p[1], p[2]);
                let db = u3_grad(p[3], p[4], p[5]);
                for t in 0..3 {
                    dtr[6 * k + t] = inner2(&da[t], &na);
                    dtr[6 * k + 3 + t] = inner2(&db[t], &nb);
                }
            } else if let GateSource::Free(family) = self.shape.gate {
                let k = j / 2;
                let (t, p) = self.shape.gate_angles(x, k);
                let [dt, dp] = fsim_grad(t, p);
                let base = 6 * (layers + 1) + 2 * k;
                dtr[base] = inner4(&dt, &mj);
                dtr[base + 1] = match family {
                    Family::FullFSim => inner4(&dp, &mj),
                    Family::FullXy => crate::qgates::small::ZERO,
                };
            }
        }

        let abs = trace.norm();
        if abs < 1e-300 {
            grad.iter_mut().for_each(|g| *g = 0.0);
        } else {
            for (g, d) in grad.iter_mut().zip(&dtr) {
                *g = -(trace.conj() * d).re / (4.0 * abs);
            }
        }
        1.0 - abs / 4.0
    }

    /// Central finite differences of [`Objective::value`].
    pub(crate) fn value_grad_fd(&self, x: &[f64], grad: &mut [f64], step: f64) -> f64 {
        let mut xp: Vec<f64> = x.to_vec();
        for i in 0..x.len() {
            xp[i] = x[i] + step;
            let up = self.value(&xp);
            xp[i] = x[i] - step;
            let down = self.value(&xp);
            xp[i] = x[i];
            grad[i] = (up - down) / (2.0 * step);
        }
        self.value(x)
    }
}
