//! Estimators of the ideal point from a frame and a sign vector.
//!
//! [`estimate_noise_free`] returns the minimum-norm point consistent with
//! every comparison. [`estimate_nu_svm`] tolerates a fraction `ν` of wrong
//! comparisons by fitting a homogeneous ν-SVM to the lifted data
//! `s_i·[a_i, −τ_i]` and dehomogenizing the classifier.

mod active_set;
pub mod hildreth;
mod nusvm;
pub mod simplex;

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, scale, sub};
use crate::model::{ComparisonFrame, SignVector};

/// Sweep cap for the min-norm solver.
pub const MAX_SWEEPS: usize = 100_000;

/// Denominators below this are treated as failed dehomogenization.
pub const DEHOMOGENIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub r: f64,
    pub nu: f64,
    pub chi: f64,
    pub max_outer_iters: usize,
    pub convergence_tol: f64,
    pub solver_tol: f64,
    pub trust_box: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            r: 1.0,
            nu: 0.0,
            chi: 0.7,
            max_outer_iters: 50,
            convergence_tol: 1e-6,
            solver_tol: 1e-8,
            trust_box: 10.0,
        }
    }
}

impl EstimatorConfig {
    pub fn new(r: f64, nu: f64) -> Self {
        EstimatorConfig { r, nu, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("R", self.r),
            ("convergence_tol", self.convergence_tol),
            ("solver_tol", self.solver_tol),
            ("trust_box", self.trust_box),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.nu) {
            return Err(Error::invalid(format!("nu must lie in [0, 1], got {}", self.nu)));
        }
        if !(self.chi > 0.0 && self.chi < 1.0) {
            return Err(Error::invalid(format!("chi must lie in (0, 1), got {}", self.chi)));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::invalid("max_outer_iters must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    Infeasible,
    DehomogenizationFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIters => "max_iters",
            Status::Infeasible => "infeasible",
            Status::DehomogenizationFailure => "dehomogenization_failure",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub x_hat: Vec<f64>,
    /// Margin of the returned classifier (ν-SVM only).
    pub rho: Option<f64>,
    /// Fraction of comparisons with slack above `solver_tol`.
    pub slack_fraction: f64,
    /// Sweeps for the min-norm solver, outer iterations for the ν-SVM.
    pub iterations: usize,
    pub status: Status,
    /// Min-norm: KKT residual. ν-SVM: worst sub-problem duality gap.
    pub kkt_residual: f64,
    /// ν-SVM: the margin is positive, so at most a fraction `ν` of the
    /// input signs disagree with `x_hat`.
    pub hamming_guarantee: bool,
    /// ν-SVM: outer iterations whose slack count exceeded `m·ν`.
    pub slack_bound_violations: usize,
    /// ν-SVM: the lifted classifier `√2·[x̂, 1]/‖[x̂, 1]‖`.
    pub w_hat: Option<Vec<f64>>,
}

impl EstimateResult {
    pub fn csv_header(dim: usize) -> String {
        let mut cols: Vec<String> = (0..dim).map(|j| format!("x_hat_{j}")).collect();
        cols.extend(["rho", "slack_fraction", "iterations", "status"].map(String::from));
        cols.join(",")
    }

    pub fn write_csv_row<W: Write>(&self, mut out: W) -> Result<()> {
        let mut fields: Vec<String> = self.x_hat.iter().map(|v| v.to_string()).collect();
        fields.push(self.rho.map_or_else(String::new, |r| r.to_string()));
        fields.push(self.slack_fraction.to_string());
        fields.push(self.iterations.to_string());
        fields.push(self.status.to_string());
        writeln!(out, "{}", fields.join(","))?;
        Ok(())
    }
}

/// ν from an estimated flip fraction: `min(2κ, 1)`.
pub fn select_nu(kappa: f64) -> f64 {
    (2.0 * kappa).clamp(0.0, 1.0)
}

fn check_inputs(frame: &ComparisonFrame, signs: &SignVector) -> Result<()> {
    if frame.len() != signs.len() {
        return Err(Error::LengthMismatch { left: frame.len(), right: signs.len() });
    }
    Ok(())
}

/// Minimum-norm point satisfying `s_i(a_iᵀw − τ_i) ≥ 0` for every `i`.
///
/// `r` is the radius of the ball the truth is assumed to lie in; when the
/// signs are consistent with a point of norm at most `r` the estimate is no
/// longer than that point.
pub fn estimate_noise_free(frame: &ComparisonFrame, signs: &SignVector, r: f64, solver_tol: f64) -> Result<EstimateResult> {
    check_inputs(frame, signs)?;
    if !(r.is_finite() && r > 0.0) || !(solver_tol.is_finite() && solver_tol > 0.0) {
        return Err(Error::invalid("R and solver_tol must be positive"));
    }
    let n = frame.dim();
    let mut rows = Vec::with_capacity(frame.len() * n);
    let mut rhs = Vec::with_capacity(frame.len());
    for (i, a) in frame.normals().enumerate() {
        let s = f64::from(signs.get(i));
        rows.extend(a.iter().map(|v| s * v));
        rhs.push(s * frame.offset(i));
    }
    let sys = hildreth::Halfspaces { dim: n, rows: &rows, rhs: &rhs };
    let mut sol = hildreth::min_norm_point(&sys, solver_tol, MAX_SWEEPS);
    if !sol.converged {
        let exact = active_set::min_norm_point(&sys, solver_tol, MAX_SWEEPS);
        if exact.kkt_residual < sol.kkt_residual {
            sol = exact;
        }
    }
    if sol.max_violation > solver_tol {
        return Err(Error::Infeasible { max_violation: sol.max_violation, sweeps: sol.sweeps });
    }
    Ok(EstimateResult {
        x_hat: sol.point,
        rho: None,
        slack_fraction: 0.0,
        iterations: sol.sweeps,
        status: if sol.converged { Status::Converged } else { Status::MaxIters },
        kkt_residual: sol.kkt_residual,
        hamming_guarantee: true,
        slack_bound_violations: 0,
        w_hat: None,
    })
}

/// Homogeneous ν-SVM estimate.
///
/// The returned `x_hat` lies in the ball of radius `config.r` and `rho` is
/// re-optimized for the returned classifier, so whenever `rho > 0` at most
/// `m·ν` input signs disagree with `x_hat`.
pub fn estimate_nu_svm(frame: &ComparisonFrame, signs: &SignVector, config: &EstimatorConfig) -> Result<EstimateResult> {
    check_inputs(frame, signs)?;
    config.validate()?;
    if frame.is_empty() {
        return Err(Error::invalid("the ν-SVM needs at least one comparison"));
    }
    let n = frame.dim();
    let d = n + 1;
    let m = frame.len();
    let y = nusvm::lift(frame.normals().flatten().copied(), n, frame.offsets(), signs.as_slice());
    // At ν = 0 the objective ignores ρ; any ν < 1/m forbids slack and still rewards the margin.
    let nu = if config.nu == 0.0 { 0.5 / m as f64 } else { config.nu };
    let count_cap = m as f64 * nu * (1.0 + 1e-12);

    let mut w_tilde = vec![0.0; d];
    w_tilde[n] = 2f64.sqrt();
    let mut w_hat = None;
    let mut status = Status::MaxIters;
    let mut worst_gap = 0.0f64;
    let mut violations = 0usize;
    let mut iterations = 0usize;
    for _ in 0..config.max_outer_iters {
        iterations += 1;
        let part = match nusvm::solve_subproblem(&y, d, &w_tilde, nu, config.trust_box) {
            Ok(s) => s,
            Err(_) => {
                status = Status::Infeasible;
                w_hat = None;
                break;
            }
        };
        worst_gap = worst_gap.max(part.gap);
        let slacks = part.xi.iter().filter(|&&v| v > config.solver_tol).count();
        if slacks as f64 > count_cap {
            violations += 1;
        }
        let step = norm(&sub(&w_tilde, &part.w));
        for (t, w) in w_tilde.iter_mut().zip(&part.w) {
            *t = config.chi * *t + (1.0 - config.chi) * w;
        }
        w_hat = Some(part.w);
        if step <= config.convergence_tol {
            status = Status::Converged;
            break;
        }
    }

    let Some(w) = w_hat else {
        return Ok(EstimateResult {
            x_hat: vec![0.0; n],
            rho: None,
            slack_fraction: 0.0,
            iterations,
            status: Status::Infeasible,
            kkt_residual: worst_gap,
            hamming_guarantee: false,
            slack_bound_violations: violations,
            w_hat: None,
        });
    };
    if w[n].abs() < DEHOMOGENIZATION_TOL {
        return Ok(EstimateResult {
            x_hat: vec![0.0; n],
            rho: None,
            slack_fraction: 0.0,
            iterations,
            status: Status::DehomogenizationFailure,
            kkt_residual: worst_gap,
            hamming_guarantee: false,
            slack_bound_violations: violations,
            w_hat: Some(w),
        });
    }
    let mut x_hat = scale(&w[..n], 1.0 / w[n]);
    let len = norm(&x_hat);
    if len > config.r {
        x_hat = scale(&x_hat, config.r / len);
    }
    let w_c = nusvm::canonical_lift(&x_hat);
    let margins: Vec<f64> = (0..m).map(|i| dot(&y[i * d..(i + 1) * d], &w_c)).collect();
    let rho = nusvm::optimal_rho(&margins, nu);
    let slacks = margins.iter().filter(|&&di| rho - di > config.solver_tol).count();
    Ok(EstimateResult {
        x_hat,
        rho: Some(rho),
        slack_fraction: slacks as f64 / m as f64,
        iterations,
        status,
        kkt_residual: worst_gap,
        hamming_guarantee: rho > 0.0,
        slack_bound_violations: violations,
        w_hat: Some(w_c),
    })
}
