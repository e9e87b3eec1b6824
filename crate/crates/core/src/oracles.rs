//! Monte Carlo ground truth for the probability bounds behind the error
//! guarantees.
//!
//! Every estimator draws a single random hyperplane per trial and counts an
//! event. Trials are split into fixed-size blocks, each with its own
//! seed-derived stream, and the blocks run on the rayon pool; the count is
//! the same for any thread count.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use libm::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::seed;

const BLOCK: u64 = 1 << 16;

/// A Monte Carlo proportion or mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub std_error: f64,
    pub seed: u64,
}

impl MCEstimate {
    fn proportion(hits: u64, trials: u64, seed: u64) -> Self {
        let p = hits as f64 / trials as f64;
        MCEstimate { estimate: p, trials, std_error: (p * (1.0 - p) / trials as f64).sqrt(), seed }
    }
}

fn count_hits<F>(trials: u64, seed: u64, f: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed::rng(seed::child_seed(seed, b + 1));
            let len = BLOCK.min(trials - b * BLOCK);
            (0..len).filter(|_| f(&mut rng)).count() as u64
        })
        .sum()
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize, out: &mut [f64]) {
    loop {
        for v in out.iter_mut().take(n) {
            *v = rng.sample(StandardNormal);
        }
        let len = norm(&out[..n]);
        if len > 0.0 {
            out[..n].iter_mut().for_each(|v| *v /= len);
            return;
        }
    }
}

fn check_common(w: &[f64], z: &[f64], delta: f64, n: usize, r: f64, trials: u64) -> Result<()> {
    if w.len() != n || z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if w.len() != n { w.len() } else { z.len() } });
    }
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("delta must be nonnegative, got {delta}")));
    }
    if !(r > 0.0) || trials == 0 || n == 0 {
        return Err(Error::invalid("R, trials and n must be positive"));
    }
    Ok(())
}

/// Probability that a random hyperplane (uniform normal, offset
/// `N(0, R²/n)`) strictly separates the `δ`-balls around `w` and `z`.
pub fn mc_sep_probability(w: &[f64], z: &[f64], delta: f64, n: usize, r: f64, trials: u64, seed: u64) -> Result<MCEstimate> {
    check_common(w, z, delta, n, r, trials)?;
    let sd = r / (n as f64).sqrt();
    let hits = count_hits(trials, seed, |rng| {
        let mut a = vec![0.0; n];
        unit_vector(rng, n, &mut a);
        let tau = sd * rng.sample::<f64, _>(StandardNormal);
        let (aw, az) = (dot(&a, w), dot(&a, z));
        (az + delta <= tau && tau <= aw - delta) || (aw + delta <= tau && tau <= az - delta)
    });
    Ok(MCEstimate::proportion(hits, trials, seed))
}

/// Lower bound on the separation probability:
/// `(‖w − z‖ − δ√(2n)) / (22√π e^{5/2} R)`.
pub fn sep_lower_bound(w: &[f64], z: &[f64], delta: f64, n: usize, r: f64) -> f64 {
    let gap = norm(&crate::linalg::sub(w, z));
    (gap - delta * (2.0 * n as f64).sqrt()) / (22.0 * PI.sqrt() * std::f64::consts::E.powf(2.5) * r)
}

/// Probability that some points of the two `δ`-balls fall on different
/// sides of a random hyperplane.
pub fn mc_nonsep_probability(w: &[f64], z: &[f64], delta: f64, n: usize, r: f64, trials: u64, seed: u64) -> Result<MCEstimate> {
    check_common(w, z, delta, n, r, trials)?;
    let sd = r / (n as f64).sqrt();
    let hits = count_hits(trials, seed, |rng| {
        let mut a = vec![0.0; n];
        unit_vector(rng, n, &mut a);
        let tau = sd * rng.sample::<f64, _>(StandardNormal);
        let (aw, az) = (dot(&a, w), dot(&a, z));
        tau > aw.min(az) - delta && tau < aw.max(az) + delta
    });
    Ok(MCEstimate::proportion(hits, trials, seed))
}

/// `√(2/π)(‖w − z‖/R + δ√n/R)`.
pub fn nonsep_upper_bound(w: &[f64], z: &[f64], delta: f64, n: usize, r: f64) -> f64 {
    let gap = norm(&crate::linalg::sub(w, z));
    (2.0 / PI).sqrt() * (gap / r + delta * (n as f64).sqrt() / r)
}

/// Probability that pre-quantization noise of variance `sigma_z2` flips the
/// comparison of `x` against a pair drawn from `N(0, (2R²/n)·I)`.
pub fn mc_flip_probability(x: &[f64], n: usize, r: f64, sigma_z2: f64, trials: u64, seed: u64) -> Result<MCEstimate> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if !(sigma_z2 >= 0.0) || !(r > 0.0) || trials == 0 {
        return Err(Error::invalid("sigma_z2 must be nonnegative, R and trials positive"));
    }
    let sd = (2.0 * r * r / n as f64).sqrt();
    let noise_sd = sigma_z2.sqrt();
    let hits = count_hits(trials, seed, |rng| {
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        loop {
            for j in 0..n {
                p[j] = sd * rng.sample::<f64, _>(StandardNormal);
                q[j] = sd * rng.sample::<f64, _>(StandardNormal);
            }
            let gap = norm(&crate::linalg::sub(&p, &q));
            if gap < crate::model::DEGENERATE_PAIR_TOL {
                continue;
            }
            let a: Vec<f64> = p.iter().zip(&q).map(|(pi, qi)| (pi - qi) / gap).collect();
            let tau = (dot(&p, &p) - dot(&q, &q)) / (2.0 * gap);
            let margin = dot(&a, x) - tau;
            let noisy = margin + noise_sd * rng.sample::<f64, _>(StandardNormal);
            return margin * noisy < 0.0;
        }
    });
    Ok(MCEstimate::proportion(hits, trials, seed))
}

/// Monte Carlo mean of `|aᵀΔ|` over uniform unit vectors, with the two
/// candidate closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMeanReport {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    /// `(2/√π)·Γ(n/2)/Γ((n+1)/2)·‖Δ‖`.
    pub unhalved: f64,
    /// `(1/√π)·Γ(n/2)/Γ((n+1)/2)·‖Δ‖`, the value of the integral.
    pub halved: f64,
}

pub fn sphere_mean_abs_constant(n: usize) -> f64 {
    let nf = n as f64;
    (ln_gamma(nf / 2.0) - ln_gamma((nf + 1.0) / 2.0)).exp() / PI.sqrt()
}

pub fn mc_sphere_mean_abs(delta_vec: &[f64], n: usize, trials: u64, seed: u64) -> Result<SphereMeanReport> {
    if delta_vec.len() != n || n == 0 {
        return Err(Error::DimensionMismatch { expected: n, found: delta_vec.len() });
    }
    if trials < 2 {
        return Err(Error::invalid("need at least two trials"));
    }
    let blocks = trials.div_ceil(BLOCK);
    let (sum, sum_sq) = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed::rng(seed::child_seed(seed, b + 1));
            let len = BLOCK.min(trials - b * BLOCK);
            let mut a = vec![0.0; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                unit_vector(&mut rng, n, &mut a);
                let v = dot(&a, delta_vec).abs();
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    let c = sphere_mean_abs_constant(n) * norm(delta_vec);
    Ok(SphereMeanReport { estimate: mean, std_error: (var / t).sqrt(), trials, seed, unhalved: 2.0 * c, halved: c })
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Φ(b) − Φ(a)` evaluated on the tail that avoids cancellation.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (erfc(a / SQRT_2) - erfc(b / SQRT_2))
    } else if b <= 0.0 {
        0.5 * (erfc(-b / SQRT_2) - erfc(-a / SQRT_2))
    } else {
        1.0 - 0.5 * (erfc(-a / SQRT_2) + erfc(b / SQRT_2))
    }
}

/// Outcome of [`check_cdf_bounds`]. Slacks are the smallest observed
/// `upper − lower` for each of the three inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfReport {
    pub pairs: usize,
    pub violations: usize,
    pub min_lower_slack: f64,
    pub min_upper_slack: f64,
    pub min_peak_slack: f64,
    /// Violations of the upper bound when `L` is taken as `min(|a|, |b|)`
    /// even for intervals containing 0.
    pub literal_min_violations: usize,
}

/// Checks `(b−a)φ(U) ≤ Φ(b)−Φ(a) ≤ (b−a)φ(L) ≤ (b−a)φ(0)` on a `grid × grid`
/// lattice of pairs `a < b` in `[a_lo, b_hi]`, where `U` and `L` are the
/// largest and smallest `|c|` over `c ∈ [a, b]`.
pub fn check_cdf_bounds(a_lo: f64, b_hi: f64, grid: usize) -> Result<CdfReport> {
    if !(a_lo < b_hi) || grid < 2 {
        return Err(Error::invalid("need a_lo < b_hi and grid >= 2"));
    }
    let pts: Vec<f64> = (0..grid).map(|i| a_lo + (b_hi - a_lo) * i as f64 / (grid - 1) as f64).collect();
    let mut pairs = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            pairs.push((a, b));
        }
    }
    Ok(check_cdf_pairs(&pairs))
}

/// [`check_cdf_bounds`] on explicit pairs.
pub fn check_cdf_pairs(pairs: &[(f64, f64)]) -> CdfReport {
    let mut report = CdfReport {
        pairs: 0,
        violations: 0,
        min_lower_slack: f64::INFINITY,
        min_upper_slack: f64::INFINITY,
        min_peak_slack: f64::INFINITY,
        literal_min_violations: 0,
    };
    for &(a, b) in pairs {
        if !(b > a) {
            continue;
        }
        report.pairs += 1;
        let mass = normal_interval(a, b);
        let upper_abs = a.abs().max(b.abs());
        let lower_abs = if a < 0.0 && b > 0.0 { 0.0 } else { a.abs().min(b.abs()) };
        let lo = (b - a) * normal_pdf(upper_abs);
        let hi = (b - a) * normal_pdf(lower_abs);
        let peak = (b - a) * normal_pdf(0.0);
        let tol = 1e-12 * mass.max(f64::MIN_POSITIVE);
        let s1 = mass - lo;
        let s2 = hi - mass;
        let s3 = peak - hi;
        if s1 < -tol || s2 < -tol || s3 < -tol {
            report.violations += 1;
        }
        if (b - a) * normal_pdf(a.abs().min(b.abs())) < mass - tol {
            report.literal_min_violations += 1;
        }
        report.min_lower_slack = report.min_lower_slack.min(s1);
        report.min_upper_slack = report.min_upper_slack.min(s2);
        report.min_peak_slack = report.min_peak_slack.min(s3);
    }
    report
}
