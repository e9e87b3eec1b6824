//! Homogeneous ν-SVM with iterative linearization of the norm constraint.
//!
//! Each outer iteration solves the linear sub-problem
//!
//! ```text
//! min  −νρ + (1/m)Σξ_i
//! s.t. y_iᵀŵ ≥ ρ − ξ_i,  ξ ≥ 0,  ŵᵀw̃ = 2,  |ŵ_j| ≤ B,  ŵ_{n+1} ≥ 0
//! ```
//!
//! with `y_i = s_i·[a_i, −τ_i]`. A negative last coordinate would invert
//! every prediction of the dehomogenized point, so it is excluded. The LP is solved in its dual form, which
//! has only `n + 2` equality rows regardless of `m`; the primal `(ŵ, ρ)` is
//! read off the row prices.

use super::simplex::{LinearProgram, LpStatus};
use crate::linalg::{dot, norm};

pub(crate) struct SubSolution {
    pub w: Vec<f64>,
    pub xi: Vec<f64>,
    pub gap: f64,
}

/// Lifted constraint rows `y_i`, row-major `m × (n+1)`.
pub(crate) fn lift(normals: impl Iterator<Item = f64>, n: usize, offsets: &[f64], signs: &[i8]) -> Vec<f64> {
    let m = offsets.len();
    let mut out = Vec::with_capacity(m * (n + 1));
    let mut it = normals;
    for i in 0..m {
        let s = f64::from(signs[i]);
        for _ in 0..n {
            out.push(s * it.next().expect("normal length"));
        }
        out.push(-s * offsets[i]);
    }
    out
}

pub(crate) fn solve_subproblem(y: &[f64], d: usize, w_tilde: &[f64], nu: f64, b: f64) -> Result<SubSolution, LpStatus> {
    let m = y.len() / d;
    let rows = d + 1;
    let cols = m + 2 + 2 * d;
    let mut lp = LinearProgram::new(rows, cols);
    let cap = 1.0 / m as f64;
    for i in 0..m {
        let col = lp.column_mut(i);
        col[..d].copy_from_slice(&y[i * d..(i + 1) * d]);
        col[d] = 1.0;
        lp.upper[i] = cap;
    }
    {
        let col = lp.column_mut(m);
        col[..d].copy_from_slice(w_tilde);
    }
    {
        let col = lp.column_mut(m + 1);
        for j in 0..d {
            col[j] = -w_tilde[j];
        }
    }
    lp.c[m] = -2.0;
    lp.c[m + 1] = 2.0;
    for j in 0..d {
        lp.column_mut(m + 2 + j)[j] = -1.0;
        lp.column_mut(m + 2 + d + j)[j] = 1.0;
        lp.c[m + 2 + j] = b;
        lp.c[m + 2 + d + j] = b;
    }
    // lower bound 0 instead of −B on the offset coordinate
    lp.c[m + 2 + 2 * d - 1] = 0.0;
    lp.b[d] = nu;
    let sol = lp.solve(50_000 + 20 * cols);
    if sol.status != LpStatus::Optimal {
        return Err(sol.status);
    }
    let mut w: Vec<f64> = sol.duals[..d].iter().map(|p| (-p).clamp(-b, b)).collect();
    w[d - 1] = w[d - 1].max(0.0);
    let rho = sol.duals[d];
    let xi: Vec<f64> = (0..m).map(|i| (rho - dot(&y[i * d..(i + 1) * d], &w)).max(0.0)).collect();
    let primal = -nu * rho + xi.iter().sum::<f64>() / m as f64;
    let dual = -sol.objective;
    let gap = (primal - dual).abs() + (dot(&w, w_tilde) - 2.0).abs();
    Ok(SubSolution { w, xi, gap })
}

/// Margin-optimal `ρ` for a fixed classifier: the `(⌊mν⌋+1)`-th smallest
/// margin, so that strictly fewer than `mν + 1` margins fall below it.
pub(crate) fn optimal_rho(margins: &[f64], nu: f64) -> f64 {
    let m = margins.len();
    let mut sorted = margins.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = ((m as f64 * nu).floor() as usize + 1).min(m);
    sorted[k - 1]
}

/// Canonical lifted classifier `√2·[x, 1]/‖[x, 1]‖` for a point.
pub(crate) fn canonical_lift(x: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = x.to_vec();
    w.push(1.0);
    let s = 2f64.sqrt() / norm(&w);
    w.iter_mut().for_each(|v| *v *= s);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_rho_counts() {
        let d = [0.5, -0.1, 0.3, 0.2, 0.9];
        // ν = 0 takes the smallest margin
        assert_eq!(optimal_rho(&d, 0.0), -0.1);
        // mν = 2 allows two margins strictly below ρ
        assert_eq!(optimal_rho(&d, 0.4), 0.3);
        assert_eq!(optimal_rho(&d, 1.0), 0.9);
    }

    #[test]
    fn canonical_lift_norm() {
        let w = canonical_lift(&[0.3, -0.4]);
        assert!((dot(&w, &w) - 2.0).abs() < 1e-15);
        assert!((w[0] / w[2] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn subproblem_certificate() {
        // four separable points in the lifted plane
        let y = [1.0, 0.2, 0.8, -0.1, -0.1, 1.0, 0.3, 0.9];
        let sol = solve_subproblem(&y, 2, &[0.0, 2f64.sqrt()], 0.25, 10.0).ok().unwrap();
        assert!(sol.gap < 1e-9);
        let count = sol.xi.iter().filter(|&&v| v > 1e-8).count();
        assert!(count as f64 <= 4.0 * 0.25);
    }
}
