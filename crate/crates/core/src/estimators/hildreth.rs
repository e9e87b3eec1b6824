//! Minimum-norm point of a polyhedron by dual coordinate ascent.
//!
//! Solves `min ½‖w‖²  s.t.  g_iᵀw ≥ b_i` through the dual, one multiplier at
//! a time. Full sweeps alternate with sweeps restricted to the multipliers
//! that are currently positive, which is where almost all of the work is once
//! the active set has settled.

use crate::linalg::{axpy, dot};

/// Result of [`min_norm_point`].
#[derive(Debug, Clone)]
pub struct MinNormPoint {
    pub point: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// Passes over constraints, full or restricted.
    pub sweeps: usize,
    /// `max(max violation, max_i λ_i·|slack_i|)`.
    pub kkt_residual: f64,
    pub max_violation: f64,
    pub converged: bool,
}

/// Row-major constraint system `g_iᵀw ≥ b_i`.
pub struct Halfspaces<'a> {
    pub dim: usize,
    pub rows: &'a [f64],
    pub rhs: &'a [f64],
}

impl Halfspaces<'_> {
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    pub(crate) fn len(&self) -> usize {
        self.rhs.len()
    }
}

fn kkt(sys: &Halfspaces<'_>, w: &[f64], lambda: &[f64]) -> (f64, f64) {
    let mut violation = 0.0f64;
    let mut complementarity = 0.0f64;
    for i in 0..sys.len() {
        let slack = dot(sys.row(i), w) - sys.rhs[i];
        violation = violation.max(-slack);
        if lambda[i] > 0.0 {
            complementarity = complementarity.max(lambda[i] * slack.abs());
        }
    }
    (violation.max(0.0), complementarity)
}

pub fn min_norm_point(sys: &Halfspaces<'_>, tol: f64, max_sweeps: usize) -> MinNormPoint {
    let m = sys.len();
    let n = sys.dim;
    let row_norm: Vec<f64> = (0..m).map(|i| dot(sys.row(i), sys.row(i)).sqrt()).collect();
    let inv_norm: Vec<f64> = row_norm.iter().map(|&s| if s > 0.0 { 1.0 / (s * s) } else { 0.0 }).collect();
    let mut w = vec![0.0; n];
    let mut lambda = vec![0.0; m];
    let mut sweeps = 0usize;
    let inner_tol = tol * 1e-2;

    let update = |i: usize, w: &mut [f64], lambda: &mut [f64]| -> f64 {
        let g = sys.row(i);
        let next = (lambda[i] + (sys.rhs[i] - dot(g, w)) * inv_norm[i]).max(0.0);
        let delta = next - lambda[i];
        if delta != 0.0 {
            axpy(delta, g, w);
            lambda[i] = next;
        }
        // distance moved by w
        delta.abs() * row_norm[i]
    };

    let mut active: Vec<usize> = Vec::new();
    let (mut violation, mut residual) = (0.0, 0.0);
    let mut converged = false;
    while sweeps < max_sweeps {
        let mut full_step = 0.0f64;
        for i in 0..m {
            full_step = full_step.max(update(i, &mut w, &mut lambda));
        }
        sweeps += 1;
        active.clear();
        active.extend((0..m).filter(|&i| lambda[i] > 0.0));
        while sweeps < max_sweeps && !active.is_empty() {
            let mut step = 0.0f64;
            for &i in &active {
                step = step.max(update(i, &mut w, &mut lambda));
            }
            sweeps += 1;
            if step <= inner_tol {
                break;
            }
            if sweeps.is_multiple_of(64) {
                active.retain(|&i| lambda[i] > 0.0);
            }
        }
        // rebuild w from the multipliers to shed accumulated rounding
        w.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            if lambda[i] > 0.0 {
                axpy(lambda[i], sys.row(i), &mut w);
            }
        }
        let (v, c) = kkt(sys, &w, &lambda);
        violation = v;
        residual = v.max(c);
        if residual <= tol {
            converged = true;
            break;
        }
        if full_step == 0.0 && active.is_empty() {
            break;
        }
    }
    if m == 0 {
        converged = true;
    }
    MinNormPoint { point: w, multipliers: lambda, sweeps, kkt_residual: residual, max_violation: violation, converged }
}
