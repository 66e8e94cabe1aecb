//! Dense BFGS with an Armijo backtracking line search.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub max_iters: usize,
    /// Stop once the gradient 2-norm drops below this.
    pub grad_tol: f64,
    /// Stop once the objective drops below this.
    pub f_stop: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    #[cfg_attr(not(test), allow(dead_code))]
    pub iterations: usize,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;
const STALL_WINDOW: usize = 12;
const STALL_RTOL: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `fg`, which returns the objective and writes the gradient into
/// its second argument.
pub(crate) fn minimize<F>(mut fg: F, x0: Vec<f64>, s: &Settings) -> Outcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut f = fg(&x, &mut g);
    if n == 0 {
        return Outcome {
            x,
            f,
            iterations: 0,
        };
    }

    // inverse Hessian approximation, row-major
    let mut h = vec![0.0; n * n];
    let reset = |h: &mut [f64], scale: f64| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            h[i * n + i] = scale;
        }
    };
    reset(&mut h, 1.0);
    let mut fresh = true;

    let mut d = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut s_vec = vec![0.0; n];
    let mut y_vec = vec![0.0; n];
    let mut hy = vec![0.0; n];
    let mut history: Vec<f64> = Vec::with_capacity(STALL_WINDOW + 1);

    let mut iterations = 0;
    while iterations < s.max_iters {
        if f <= s.f_stop || sqrt(dot(&g, &g)) <= s.grad_tol {
            break;
        }
        iterations += 1;

        for i in 0..n {
            d[i] = -dot(&h[i * n..(i + 1) * n], &g);
        }
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            reset(&mut h, 1.0);
            fresh = true;
            for i in 0..n {
                d[i] = -g[i];
            }
            slope = -dot(&g, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                x_new[i] = x[i] + step * d[i];
            }
            let f_try = fg(&x_new, &mut g_new);
            if f_try.is_finite() && f_try <= f + ARMIJO_C1 * step * slope {
                accepted = Some(f_try);
                break;
            }
            step *= 0.5;
        }
        let Some(f_new) = accepted else {
            if fresh {
                break;
            }
            // the quasi-Newton direction was poor; retry along -g
            reset(&mut h, 1.0);
            fresh = true;
            continue;
        };

        for i in 0..n {
            s_vec[i] = x_new[i] - x[i];
            y_vec[i] = g_new[i] - g[i];
        }
        let sy = dot(&s_vec, &y_vec);
        let yy = dot(&y_vec, &y_vec);
        if sy > 1e-12 * sqrt(dot(&s_vec, &s_vec) * yy) && sy > 0.0 {
            if fresh {
                reset(&mut h, sy / yy);
                fresh = false;
            }
            for i in 0..n {
                hy[i] = dot(&h[i * n..(i + 1) * n], &y_vec);
            }
            let yhy = dot(&y_vec, &hy);
            let rho = 1.0 / sy;
            let coef = (1.0 + rho * yhy) * rho;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] +=
                        coef * s_vec[i] * s_vec[j] - rho * (hy[i] * s_vec[j] + s_vec[i] * hy[j]);
                }
            }
        }

        core::mem::swap(&mut x, &mut x_new);
        core::mem::swap(&mut g, &mut g_new);
        f = f_new;

        history.push(f);
        if history.len() > STALL_WINDOW {
            let old = history.remove(0);
            if old - f <= STALL_RTOL * f.abs() {
                break;
            }
        }
    }
    Outcome { x, f, iterations }
}
