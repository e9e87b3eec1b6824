//! The Monte Carlo lemma suite run by `pairloc validate`.

use crate::bounds::kappa_n;
use crate::error::Result;
use crate::oracles::{
    check_cdf_bounds, mc_flip_probability, mc_nonsep_probability, mc_sep_probability, mc_sphere_mean_abs,
    nonsep_upper_bound, sep_lower_bound,
};
use crate::seed::child_seed;

/// One row of the suite. `slack` is positive when the check passes by a
/// margin, in the direction of the inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub check: &'static str,
    pub params: String,
    pub estimate: f64,
    pub bound: f64,
    pub std_error: f64,
    pub slack: f64,
    pub pass: bool,
}

/// `(n, σ_z², ‖x‖)` grid for the flip-probability check.
pub const FLIP_GRID: [(usize, f64, f64); 12] = [
    (2, 0.05, 0.0),
    (2, 0.05, 0.7),
    (2, 0.5, 0.5),
    (3, 0.05, 0.0),
    (3, 0.05, 0.7),
    (3, 0.2, 0.3),
    (4, 0.1, 0.5),
    (4, 0.5, 0.0),
    (4, 0.01, 1.0),
    (8, 0.1, 0.5),
    (8, 0.01, 0.9),
    (8, 1.0, 0.2),
];

/// `(w, z, δ)` configurations for the separation checks.
pub fn separation_grid() -> Vec<(Vec<f64>, Vec<f64>, f64)> {
    vec![
        (vec![0.5, 0.0], vec![-0.5, 0.0], 0.0),
        (vec![0.3, 0.2], vec![-0.1, -0.4], 0.05),
        (vec![0.5, 0.0, 0.0], vec![0.0, 0.5, 0.0], 0.01),
        (vec![0.4, 0.0, 0.0, 0.0, 0.0], vec![-0.4, 0.0, 0.0, 0.0, 0.0], 0.02),
    ]
}

/// `(w, z, δ)` configurations for the non-separation checks.
pub fn non_separation_grid() -> Vec<(Vec<f64>, Vec<f64>, f64)> {
    vec![
        (vec![0.1, 0.0, 0.0], vec![-0.1, 0.0, 0.0], 0.01),
        (vec![0.1, 0.0], vec![-0.1, 0.0], 0.0),
        (vec![0.3, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 0.0], 0.05),
        (vec![0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], vec![-0.1, 0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0),
    ]
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Runs every check with `trials` Monte Carlo draws each.
pub fn lemma_suite(trials: u64, seed: u64) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    let mut stream = 0u64;
    let mut next_seed = || {
        stream += 1;
        child_seed(seed, stream)
    };
    for &(n, s2, xn) in &FLIP_GRID {
        let mut x = vec![0.0; n];
        x[0] = xn;
        let est = mc_flip_probability(&x, n, 1.0, s2, trials, next_seed())?;
        let bound = kappa_n(s2, 1.0, n, xn)?;
        let slack = bound + 3.0 * est.std_error - est.estimate;
        out.push(LemmaCheck {
            check: "flip",
            params: format!("n={n};sigma_z2={s2};x_norm={xn}"),
            estimate: est.estimate,
            bound,
            std_error: est.std_error,
            slack,
            pass: slack >= 0.0,
        });
    }
    for (w, z, delta) in separation_grid() {
        let n = w.len();
        let est = mc_sep_probability(&w, &z, delta, n, 1.0, trials, next_seed())?;
        let bound = sep_lower_bound(&w, &z, delta, n, 1.0);
        let slack = est.estimate - (bound - 3.0 * est.std_error);
        out.push(LemmaCheck {
            check: "separation",
            params: format!("w={};z={};delta={delta}", fmt_vec(&w), fmt_vec(&z)),
            estimate: est.estimate,
            bound,
            std_error: est.std_error,
            slack,
            pass: slack >= 0.0,
        });
    }
    for (w, z, delta) in non_separation_grid() {
        let n = w.len();
        let est = mc_nonsep_probability(&w, &z, delta, n, 1.0, trials, next_seed())?;
        let bound = nonsep_upper_bound(&w, &z, delta, n, 1.0);
        let slack = bound + 3.0 * est.std_error - est.estimate;
        out.push(LemmaCheck {
            check: "non_separation",
            params: format!("w={};z={};delta={delta}", fmt_vec(&w), fmt_vec(&z)),
            estimate: est.estimate,
            bound,
            std_error: est.std_error,
            slack,
            pass: slack >= 0.0,
        });
    }
    for n in [2usize, 3, 5] {
        let mut d = vec![0.0; n];
        d[0] = 1.0;
        let rep = mc_sphere_mean_abs(&d, n, trials, next_seed())?;
        let slack = 3.0 * rep.std_error - (rep.estimate - rep.halved).abs();
        out.push(LemmaCheck {
            check: "sphere_mean_abs",
            params: format!("n={n};delta_norm=1;unhalved={}", rep.unhalved),
            estimate: rep.estimate,
            bound: rep.halved,
            std_error: rep.std_error,
            slack,
            pass: slack >= 0.0,
        });
    }
    let cdf = check_cdf_bounds(-6.0, 6.0, 142)?;
    out.push(LemmaCheck {
        check: "cdf_bounds",
        params: format!("pairs={};literal_min_violations={}", cdf.pairs, cdf.literal_min_violations),
        estimate: cdf.violations as f64,
        bound: 0.0,
        std_error: 0.0,
        slack: cdf.min_lower_slack.min(cdf.min_upper_slack).min(cdf.min_peak_slack),
        pass: cdf.violations == 0,
    });
    Ok(out)
}
