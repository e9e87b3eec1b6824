//! Closed-form sample-complexity and error bounds.
//!
//! Every function here is a pure evaluation of a formula. Logarithms are
//! natural unless the name says otherwise.

use std::f64::consts::{E, PI};

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Prefactor `44·√π·e^{5/2}` of the sufficient-m bound, also the default
/// constant of the adaptive per-stage budget.
pub fn sufficient_m_constant() -> f64 {
    44.0 * PI.sqrt() * E.powf(2.5)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(format!("{name} must be finite and positive, got {v}")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

fn ceil_count(v: f64) -> Result<u64> {
    if !v.is_finite() || v > u64::MAX as f64 {
        return Err(Error::invalid(format!("bound {v} is not representable")));
    }
    Ok(v.max(0.0).ceil() as u64)
}

/// Real-valued right-hand side of the sufficient-m bound with an explicit
/// prefactor `c`.
pub fn sufficient_m_value(r: f64, eps: f64, n: usize, eta: f64, c: f64) -> Result<f64> {
    check_positive("R", r)?;
    check_positive("eps", eps)?;
    check_positive("constant", c)?;
    check_dim(n)?;
    check_eta(eta)?;
    if eps > 2.0 * r {
        return Err(Error::invalid(format!("eps must not exceed 2R, got eps={eps}, R={r}")));
    }
    let nf = n as f64;
    let log_term = (3.0 * r * (4.0 + (8.0 * nf).sqrt()) / eps).ln();
    Ok(c * (r / eps) * (2.0 * nf * log_term + (1.0 / eta).ln()))
}

/// Smallest integer `m` meeting the sufficient-m bound with the default
/// prefactor.
pub fn sufficient_m(r: f64, eps: f64, n: usize, eta: f64) -> Result<u64> {
    sufficient_m_with_constant(r, eps, n, eta, sufficient_m_constant())
}

pub fn sufficient_m_with_constant(r: f64, eps: f64, n: usize, eta: f64, c: f64) -> Result<u64> {
    ceil_count(sufficient_m_value(r, eps, n, eta, c)?)
}

/// Below `(2/e)(R/ε)n` comparisons some two points at distance `ε` share a
/// cell of the arrangement.
pub fn lower_bound_m(r: f64, eps: f64, n: usize) -> Result<f64> {
    check_positive("R", r)?;
    check_positive("eps", eps)?;
    check_dim(n)?;
    Ok(2.0 / E * (r / eps) * n as f64)
}

/// Maximum number of cells `F_n(m) = Σ_{i=0}^{n} C(m, i)` cut out of `R^n`
/// by `m` hyperplanes.
pub fn cell_count(m: u64, n: u32) -> BigUint {
    let mut total = BigUint::from(1u32);
    let mut binom = BigUint::from(1u32);
    for i in 1..=u64::from(n).min(m) {
        binom = binom * (m - i + 1) / i;
        total += &binom;
    }
    total
}

/// Bound on the per-comparison flip probability under pre-quantization
/// Gaussian noise of variance `sigma_z2`.
///
/// For `n = 3` and `x_norm = 0` the second branch of the minimum is taken as
/// `+∞`.
pub fn kappa_n(sigma_z2: f64, r: f64, n: usize, x_norm: f64) -> Result<f64> {
    check_positive("R", r)?;
    if !(sigma_z2.is_finite() && sigma_z2 >= 0.0) {
        return Err(Error::invalid(format!("sigma_z2 must be nonnegative, got {sigma_z2}")));
    }
    if !(x_norm >= 0.0 && x_norm <= r) {
        return Err(Error::invalid(format!("x_norm must lie in [0, R], got {x_norm}")));
    }
    if n < 2 {
        return Err(Error::invalid("kappa_n requires n >= 2"));
    }
    let nf = n as f64;
    let kappa = match n {
        2 => 0.5 * (sigma_z2 / (sigma_z2 + r * r)).sqrt(),
        3 => {
            let first = (sigma_z2 / (sigma_z2 + 2.0 * r * r / 3.0)).sqrt();
            let second = if x_norm == 0.0 { f64::INFINITY } else { (PI / 2.0).sqrt() * sigma_z2.sqrt() / x_norm };
            first.min(second)
        }
        _ => (sigma_z2 / (sigma_z2 + 2.0 * r * r / nf + 4.0 * x_norm * x_norm / nf)).sqrt(),
    };
    Ok(kappa)
}

/// Constants of the stable-embedding sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingConstants {
    pub big_c1: f64,
    pub small_c1: f64,
    pub big_c2: f64,
    pub small_c2: f64,
}

pub fn embedding_constants() -> EmbeddingConstants {
    let root = (2.0 / PI).sqrt();
    let big_c1 = 1.0 / (22.0 * E.powf(2.5) * PI.sqrt());
    EmbeddingConstants {
        big_c1,
        small_c1: 1.0 + 1.0 / (11.0 * E.powf(2.5) * PI.sqrt()) + root,
        big_c2: root,
        small_c2: 1.0 + 3.0 * root,
    }
}

/// Embedding distortion `ζ` reached with `m` comparisons.
pub fn zeta_of_m(m: u64, n: usize, eta: f64) -> Result<f64> {
    check_dim(n)?;
    check_eta(eta)?;
    let nf = n as f64;
    let mf = m as f64;
    if m == 0 || mf < E / 18.0 * (eta / 2.0).powf(1.0 / nf) {
        return Err(Error::invalid(format!("m = {m} is too small for the distortion formula")));
    }
    Ok(((nf * (18.0 * mf).ln() + (2.0 / eta).ln()) / (2.0 * mf)).sqrt())
}

/// Comparisons sufficient for a `ζ`-stable embedding.
pub fn embedding_m(zeta: f64, n: usize, eta: f64) -> Result<u64> {
    check_positive("zeta", zeta)?;
    check_dim(n)?;
    check_eta(eta)?;
    let nf = n as f64;
    let v = (2.0 * nf * (3.0 * nf.sqrt() / zeta).ln() + (2.0 / eta).ln()) / (2.0 * zeta * zeta);
    ceil_count(v)
}

fn check_error_inputs(m: u64, n: usize, eta: f64, r: f64) -> Result<f64> {
    check_positive("R", r)?;
    zeta_of_m(m, n, eta)
}

/// Error bound under a fraction `kappa` of flipped comparisons.
pub fn error_bound_flips(kappa: f64, m: u64, n: usize, eta: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::invalid(format!("kappa must lie in [0, 1], got {kappa}")));
    }
    let zeta = check_error_inputs(m, n, eta, r)?;
    let k = embedding_constants();
    Ok(r * (2.0 * kappa / k.big_c1 + k.small_c1 / k.big_c1 * zeta))
}

/// Error bound under pre-quantization Gaussian noise.
pub fn error_bound_gaussian(sigma_z2: f64, m: u64, n: usize, eta: f64, r: f64) -> Result<f64> {
    if !(sigma_z2.is_finite() && sigma_z2 >= 0.0) {
        return Err(Error::invalid(format!("sigma_z2 must be nonnegative, got {sigma_z2}")));
    }
    let zeta = check_error_inputs(m, n, eta, r)?;
    let k = embedding_constants();
    let nf = n as f64;
    let noise = 2f64.sqrt() / k.big_c1 * (nf * sigma_z2 / (r * r)).sqrt();
    let conc = 1.0 / k.big_c1 * ((1.0 / eta).ln() / (2.0 * m as f64)).sqrt();
    Ok(r * (noise + conc + k.small_c1 / k.big_c1 * zeta))
}

/// Error bound when signs are those of a perturbed point `x'`.
pub fn error_bound_arbitrary(perturb_norm: f64, m: u64, n: usize, eta: f64, r: f64) -> Result<f64> {
    if !(perturb_norm.is_finite() && perturb_norm >= 0.0) {
        return Err(Error::invalid(format!("perturbation norm must be nonnegative, got {perturb_norm}")));
    }
    let zeta = check_error_inputs(m, n, eta, r)?;
    let k = embedding_constants();
    Ok(r * (2.0 * k.big_c2 / k.big_c1 * (perturb_norm / r) + (k.small_c1 + 2.0 * k.small_c2) / k.big_c1 * zeta))
}

/// Total budget for a dyadic adaptive schedule reaching accuracy `eps_t`.
pub fn adaptive_m_value(r: f64, eps_t: f64, n: usize, eta: f64, c: f64) -> Result<f64> {
    check_positive("R", r)?;
    check_positive("eps_t", eps_t)?;
    check_positive("constant", c)?;
    check_dim(n)?;
    check_eta(eta)?;
    if eps_t > r {
        return Err(Error::invalid(format!("eps_t must not exceed R, got {eps_t}")));
    }
    let nf = n as f64;
    Ok(2.0 * c * (2.0 * r / eps_t).log2() * (nf * (2.0 * nf.sqrt()).ln() + (1.0 / eta).ln()))
}

pub fn adaptive_m(r: f64, eps_t: f64, n: usize, eta: f64, c: f64) -> Result<u64> {
    ceil_count(adaptive_m_value(r, eps_t, n, eta, c)?)
}

/// One evaluated bound, for tabular output.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
    pub value: f64,
    pub formula: &'static str,
}

/// Parameters for [`standard_reports`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub r: f64,
    pub eps: f64,
    pub n: usize,
    pub eta: f64,
    pub m: u64,
    pub kappa: f64,
    pub sigma_z2: f64,
    pub x_norm: f64,
    pub perturb_norm: f64,
    pub zeta: f64,
    pub constant: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            r: 1.0,
            eps: 0.25,
            n: 2,
            eta: 0.1,
            m: 1000,
            kappa: 0.05,
            sigma_z2: 0.01,
            x_norm: 0.5,
            perturb_norm: 0.1,
            zeta: 0.2,
            constant: sufficient_m_constant(),
        }
    }
}

/// Evaluates every bound at one parameter point.
pub fn standard_reports(p: &BoundInputs) -> Result<Vec<BoundReport>> {
    let nf = p.n as f64;
    let mf = p.m as f64;
    let k = embedding_constants();
    let mut out = vec![
        BoundReport {
            name: "sufficient_m",
            inputs: vec![("R", p.r), ("eps", p.eps), ("n", nf), ("eta", p.eta), ("C", p.constant)],
            value: sufficient_m_with_constant(p.r, p.eps, p.n, p.eta, p.constant)? as f64,
            formula: "ceil(C*(R/eps)*(2n*ln(3R(4+sqrt(8n))/eps)+ln(1/eta)))",
        },
        BoundReport {
            name: "lower_bound_m",
            inputs: vec![("R", p.r), ("eps", p.eps), ("n", nf)],
            value: lower_bound_m(p.r, p.eps, p.n)?,
            formula: "(2/e)*(R/eps)*n",
        },
        BoundReport {
            name: "cell_count",
            inputs: vec![("m", mf), ("n", nf)],
            value: f64_from_big(&cell_count(p.m, p.n as u32)),
            formula: "sum_{i=0..n} binom(m,i)",
        },
    ];
    if p.n >= 2 {
        out.push(BoundReport {
            name: "kappa_n",
            inputs: vec![("sigma_z2", p.sigma_z2), ("R", p.r), ("n", nf), ("x_norm", p.x_norm)],
            value: kappa_n(p.sigma_z2, p.r, p.n, p.x_norm)?,
            formula: "n=2: sqrt(s/(s+R^2))/2; n=3: min(sqrt(s/(s+2R^2/3)), sqrt(pi/2)sqrt(s)/|x|); n>=4: sqrt(s/(s+2R^2/n+4|x|^2/n))",
        });
    }
    for (name, value) in [("C1", k.big_c1), ("c1", k.small_c1), ("C2", k.big_c2), ("c2", k.small_c2)] {
        out.push(BoundReport { name, inputs: vec![], value, formula: "embedding constant" });
    }
    out.extend([
        BoundReport {
            name: "zeta_of_m",
            inputs: vec![("m", mf), ("n", nf), ("eta", p.eta)],
            value: zeta_of_m(p.m, p.n, p.eta)?,
            formula: "sqrt((n*ln(18m)+ln(2/eta))/(2m))",
        },
        BoundReport {
            name: "embedding_m",
            inputs: vec![("zeta", p.zeta), ("n", nf), ("eta", p.eta)],
            value: embedding_m(p.zeta, p.n, p.eta)? as f64,
            formula: "ceil((2n*ln(3sqrt(n)/zeta)+ln(2/eta))/(2zeta^2))",
        },
        BoundReport {
            name: "error_bound_flips",
            inputs: vec![("kappa", p.kappa), ("m", mf), ("n", nf), ("eta", p.eta), ("R", p.r)],
            value: error_bound_flips(p.kappa, p.m, p.n, p.eta, p.r)?,
            formula: "R*(2kappa/C1+(c1/C1)*zeta(m))",
        },
        BoundReport {
            name: "error_bound_gaussian",
            inputs: vec![("sigma_z2", p.sigma_z2), ("m", mf), ("n", nf), ("eta", p.eta), ("R", p.r)],
            value: error_bound_gaussian(p.sigma_z2, p.m, p.n, p.eta, p.r)?,
            formula: "R*((sqrt2/C1)sqrt(n*s/R^2)+(1/C1)sqrt(ln(1/eta)/2m)+(c1/C1)*zeta(m))",
        },
        BoundReport {
            name: "error_bound_arbitrary",
            inputs: vec![("perturb_norm", p.perturb_norm), ("m", mf), ("n", nf), ("eta", p.eta), ("R", p.r)],
            value: error_bound_arbitrary(p.perturb_norm, p.m, p.n, p.eta, p.r)?,
            formula: "R*((2C2/C1)(d/R)+((c1+2c2)/C1)*zeta(m))",
        },
    ]);
    if p.eps <= p.r {
        out.push(BoundReport {
            name: "adaptive_m",
            inputs: vec![("R", p.r), ("eps_t", p.eps), ("n", nf), ("eta", p.eta), ("C", p.constant)],
            value: adaptive_m(p.r, p.eps, p.n, p.eta, p.constant)? as f64,
            formula: "ceil(2C*log2(2R/eps_t)*(n*ln(2sqrt(n))+ln(1/eta)))",
        });
    }
    Ok(out)
}

fn f64_from_big(v: &BigUint) -> f64 {
    v.to_string().parse().unwrap_or(f64::INFINITY)
}
