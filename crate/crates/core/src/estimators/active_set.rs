//! Dual active-set method for the minimum-norm point of a polyhedron.
//!
//! Same problem as [`super::hildreth`], solved exactly: starting from the
//! origin, the most violated constraint is added while the current active
//! constraints stay tight, dropping any whose multiplier would turn negative.
//! Finite, and insensitive to the thin cells that stall coordinate ascent.

use super::hildreth::{Halfspaces, MinNormPoint};
use crate::linalg::{axpy, dot};

/// Solves `G u = rhs` for a small dense symmetric system, `None` if singular.
fn solve_small(mut g: Vec<f64>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| g[a * k + col].abs().total_cmp(&g[b * k + col].abs()))?;
        if g[piv * k + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..k {
                g.swap(piv * k + j, col * k + j);
            }
            rhs.swap(piv, col);
        }
        for row in col + 1..k {
            let f = g[row * k + col] / g[col * k + col];
            if f != 0.0 {
                for j in col..k {
                    g[row * k + j] -= f * g[col * k + j];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    for col in (0..k).rev() {
        let tail: f64 = (col + 1..k).map(|j| g[col * k + j] * rhs[j]).sum();
        rhs[col] = (rhs[col] - tail) / g[col * k + col];
    }
    Some(rhs)
}

fn violation(sys: &Halfspaces<'_>, w: &[f64], i: usize) -> f64 {
    sys.rhs[i] - dot(sys.row(i), w)
}

/// Primal and dual step directions for adding `p` to `active`.
fn directions(sys: &Halfspaces<'_>, active: &[usize], p: usize) -> (Vec<f64>, Vec<f64>) {
    let gp = sys.row(p);
    let k = active.len();
    let mut gram = vec![0.0; k * k];
    for (a, &i) in active.iter().enumerate() {
        for (b, &j) in active.iter().enumerate() {
            gram[a * k + b] = dot(sys.row(i), sys.row(j));
        }
    }
    let proj: Vec<f64> = active.iter().map(|&i| dot(sys.row(i), gp)).collect();
    let r = if k == 0 { Vec::new() } else { solve_small(gram, proj).unwrap_or_else(|| vec![0.0; k]) };
    let mut z = gp.to_vec();
    for (&i, &ri) in active.iter().zip(&r) {
        axpy(-ri, sys.row(i), &mut z);
    }
    (z, r)
}

pub fn min_norm_point(sys: &Halfspaces<'_>, tol: f64, max_iters: usize) -> MinNormPoint {
    let m = sys.len();
    let n = sys.dim;
    let mut w = vec![0.0; n];
    let mut active: Vec<usize> = Vec::new();
    let mut u: Vec<f64> = Vec::new();
    let mut iters = 0usize;
    let mut stuck = false;

    'outer: while iters < max_iters {
        let mut p = None;
        let mut worst = tol * 1e-2;
        for i in 0..m {
            let norm = dot(sys.row(i), sys.row(i)).sqrt();
            if norm > 0.0 && !active.contains(&i) {
                let v = violation(sys, &w, i) / norm;
                if v > worst {
                    worst = v;
                    p = Some(i);
                }
            }
        }
        let Some(p) = p else { break };
        let mut up = 0.0;
        loop {
            iters += 1;
            if iters > max_iters {
                break 'outer;
            }
            let (z, r) = directions(sys, &active, p);
            let gp_norm_sq = dot(sys.row(p), sys.row(p));
            let zz = dot(&z, &z);
            let dependent = zz <= 1e-20 * gp_norm_sq;
            let mut partial = (f64::INFINITY, usize::MAX);
            for (j, &rj) in r.iter().enumerate() {
                if rj > 0.0 {
                    let t = u[j] / rj;
                    if t < partial.0 {
                        partial = (t, j);
                    }
                }
            }
            let full = if dependent { f64::INFINITY } else { violation(sys, &w, p) / zz };
            if full.is_infinite() && partial.0.is_infinite() {
                stuck = true;
                break 'outer;
            }
            let t = full.min(partial.0);
            if !dependent {
                axpy(t, &z, &mut w);
            }
            for (uj, rj) in u.iter_mut().zip(&r) {
                *uj -= t * rj;
            }
            up += t;
            if full <= partial.0 {
                active.push(p);
                u.push(up);
                break;
            }
            let k = partial.1;
            active.remove(k);
            u.remove(k);
        }
        // rebuild w from the multipliers to shed accumulated rounding
        w.iter_mut().for_each(|v| *v = 0.0);
        for (&i, &ui) in active.iter().zip(&u) {
            axpy(ui, sys.row(i), &mut w);
        }
    }

    let mut multipliers = vec![0.0; m];
    for (&i, &ui) in active.iter().zip(&u) {
        multipliers[i] = ui.max(0.0);
    }
    let mut max_violation = 0.0f64;
    let mut complementarity = 0.0f64;
    for i in 0..m {
        let slack = -violation(sys, &w, i);
        max_violation = max_violation.max(-slack);
        complementarity = complementarity.max(multipliers[i] * slack.abs());
    }
    let kkt_residual = max_violation.max(complementarity);
    MinNormPoint {
        point: w,
        multipliers,
        sweeps: iters,
        kkt_residual,
        max_violation,
        converged: !stuck && kkt_residual <= tol,
    }
}
