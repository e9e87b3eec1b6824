//! Corrupting observations.
//!
//! Three families: Gaussian noise added to the margin before the sign is
//! taken (equivalently, each comparison made at a Gaussian-perturbed copy of
//! the ideal point), uniformly random flips, and adversarial flips of the
//! comparisons whose hyperplanes lie farthest from the ideal point.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::dot;
use crate::model::{observe, sign, ComparisonFrame, SignVector};
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    GaussianPrequant { variance: f64, seed: u64 },
    RandomFlip { fraction: f64, seed: u64 },
    AdversarialFlip { fraction: f64 },
    PerturbedPoint { variance: f64, seed: u64 },
}

impl NoiseSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            NoiseSpec::GaussianPrequant { .. } => "gaussian_prequant",
            NoiseSpec::RandomFlip { .. } => "random_flip",
            NoiseSpec::AdversarialFlip { .. } => "adversarial_flip",
            NoiseSpec::PerturbedPoint { .. } => "perturbed_point",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            NoiseSpec::GaussianPrequant { seed, .. }
            | NoiseSpec::RandomFlip { seed, .. }
            | NoiseSpec::PerturbedPoint { seed, .. } => Some(seed),
            NoiseSpec::AdversarialFlip { .. } => None,
        }
    }

    /// The same noise with its seed replaced (flip-free kinds ignore it).
    pub fn reseeded(&self, new_seed: u64) -> NoiseSpec {
        match *self {
            NoiseSpec::GaussianPrequant { variance, .. } => NoiseSpec::GaussianPrequant { variance, seed: new_seed },
            NoiseSpec::RandomFlip { fraction, .. } => NoiseSpec::RandomFlip { fraction, seed: new_seed },
            NoiseSpec::AdversarialFlip { fraction } => NoiseSpec::AdversarialFlip { fraction },
            NoiseSpec::PerturbedPoint { variance, .. } => NoiseSpec::PerturbedPoint { variance, seed: new_seed },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::GaussianPrequant { variance, .. } | NoiseSpec::PerturbedPoint { variance, .. } => {
                check_variance(variance)
            }
            NoiseSpec::RandomFlip { fraction, .. } | NoiseSpec::AdversarialFlip { fraction } => {
                check_fraction(fraction)
            }
        }
    }

    /// Observes `x` against `frame` under this noise model.
    pub fn observe(&self, x: &[f64], frame: &ComparisonFrame) -> Result<SignVector> {
        match *self {
            NoiseSpec::GaussianPrequant { variance, seed } => gaussian_prequant(x, frame, variance, seed),
            NoiseSpec::PerturbedPoint { variance, seed } => perturbed_point_observe(x, frame, variance, seed),
            NoiseSpec::RandomFlip { fraction, seed } => flip_random(&observe(x, frame)?, fraction, seed),
            NoiseSpec::AdversarialFlip { fraction } => flip_adversarial(&observe(x, frame)?, frame, x, fraction),
        }
    }
}

fn check_variance(variance: f64) -> Result<()> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(Error::invalid(format!("noise variance must be ≥ 0, got {variance}")));
    }
    Ok(())
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::invalid(format!("flip fraction must lie in [0, 1], got {fraction}")));
    }
    Ok(())
}

/// Number of entries flipped for a fraction `κ` of `m`: `round(κ·m)`,
/// halves rounded away from zero.
pub fn flip_count(fraction: f64, m: usize) -> usize {
    ((fraction * m as f64).round() as usize).min(m)
}

/// `sign(a_i·x − τ_i + z_i)` with `z_i ~ N(0, σ_z²)` i.i.d.
pub fn gaussian_prequant(x: &[f64], frame: &ComparisonFrame, variance: f64, seed: u64) -> Result<SignVector> {
    check_variance(variance)?;
    let mut margins = frame.margins(x)?;
    if variance > 0.0 {
        let sd = variance.sqrt();
        let mut rng = seed::rng(seed);
        for v in &mut margins {
            *v += sd * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Ok(SignVector::from_values(&margins))
}

/// Each comparison observed at its own perturbed point `x + z_i`,
/// `z_i ~ N(0, σ_z² I)`.
pub fn perturbed_point_observe(x: &[f64], frame: &ComparisonFrame, variance: f64, seed: u64) -> Result<SignVector> {
    check_variance(variance)?;
    frame.check_dim(x)?;
    let sd = variance.sqrt();
    let mut rng = seed::rng(seed);
    let mut perturbed = vec![0.0; x.len()];
    let signs = (0..frame.len())
        .map(|i| {
            for (p, xi) in perturbed.iter_mut().zip(x) {
                *p = if variance > 0.0 { xi + sd * rng.sample::<f64, _>(StandardNormal) } else { *xi };
            }
            sign(dot(frame.normal(i), &perturbed) - frame.offset(i))
        })
        .collect();
    SignVector::new(signs)
}

/// Negates `round(κ·m)` entries chosen uniformly without replacement.
pub fn flip_random(signs: &SignVector, fraction: f64, seed: u64) -> Result<SignVector> {
    check_fraction(fraction)?;
    let k = flip_count(fraction, signs.len());
    let mut out = signs.clone();
    if k > 0 {
        let mut rng = seed::rng(seed);
        let chosen = rand::seq::index::sample(&mut rng, signs.len(), k).into_vec();
        out.flip(&chosen);
    }
    Ok(out)
}

/// Negates the `round(κ·m)` comparisons with the largest `|a_i·x − τ_i|`;
/// ties go to the lower index.
pub fn flip_adversarial(signs: &SignVector, frame: &ComparisonFrame, x: &[f64], fraction: f64) -> Result<SignVector> {
    check_fraction(fraction)?;
    if signs.len() != frame.len() {
        return Err(Error::LengthMismatch { left: signs.len(), right: frame.len() });
    }
    let margins = frame.margins(x)?;
    let k = flip_count(fraction, signs.len());
    let mut order: Vec<usize> = (0..margins.len()).collect();
    // stable sort keeps lower indices first among equal margins
    order.sort_by(|&i, &j| margins[j].abs().total_cmp(&margins[i].abs()));
    let mut out = signs.clone();
    out.flip(&order[..k]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::kappa_n;
    use crate::model::{generate_frame, hamming};

    fn frame_with_offsets(offsets: &[f64]) -> ComparisonFrame {
        let normals = offsets.iter().flat_map(|_| [1.0, 0.0]).collect();
        ComparisonFrame::from_hyperplanes(2, normals, offsets.to_vec()).unwrap()
    }

    #[test]
    fn zero_variance_is_clean() {
        let f = generate_frame(500, 3, &[0.0; 3], 1.0, 1).unwrap();
        let x = [0.2, -0.1, 0.4];
        let clean = observe(&x, &f).unwrap();
        assert_eq!(gaussian_prequant(&x, &f, 0.0, 9).unwrap(), clean);
        assert_eq!(perturbed_point_observe(&x, &f, 0.0, 9).unwrap(), clean);
    }

    #[test]
    fn flip_counts_exact() {
        let s = SignVector::new(vec![1; 100]).unwrap();
        assert_eq!(flip_random(&s, 0.0, 3).unwrap(), s);
        let out = flip_random(&s, 0.1, 3).unwrap();
        assert_eq!(hamming(&s, &out).unwrap(), 0.10);
        assert_eq!(out, flip_random(&s, 0.1, 3).unwrap());
        assert_ne!(out, flip_random(&s, 0.1, 4).unwrap());
        assert!(flip_random(&s, 1.5, 3).is_err());
    }

    #[test]
    fn rounding_goes_away_from_zero() {
        assert_eq!(flip_count(0.5, 3), 2);
        assert_eq!(flip_count(0.25, 2), 1);
        assert_eq!(flip_count(0.1, 4), 0);
        assert_eq!(flip_count(1.0, 7), 7);
    }

    #[test]
    fn adversarial_flips_farthest() {
        // x = 0, margins |−τ| = 0.9, 0.5, 0.1
        let f = frame_with_offsets(&[0.9, -0.5, 0.1]);
        let x = [0.0, 0.0];
        let clean = observe(&x, &f).unwrap();
        assert_eq!(flip_adversarial(&clean, &f, &x, 0.0).unwrap(), clean);
        let out = flip_adversarial(&clean, &f, &x, 1.0 / 3.0).unwrap();
        let changed: Vec<usize> = (0..3).filter(|&i| out.get(i) != clean.get(i)).collect();
        assert_eq!(changed, vec![0]);
        let all = flip_adversarial(&clean, &f, &x, 1.0).unwrap();
        assert_eq!(hamming(&clean, &all).unwrap(), 1.0);
    }

    #[test]
    fn adversarial_ties_prefer_lower_index() {
        let f = frame_with_offsets(&[0.5, 0.5, 0.5, 0.2]);
        let x = [0.0, 0.0];
        let clean = observe(&x, &f).unwrap();
        let out = flip_adversarial(&clean, &f, &x, 0.5).unwrap();
        let changed: Vec<usize> = (0..4).filter(|&i| out.get(i) != clean.get(i)).collect();
        assert_eq!(changed, vec![0, 1]);
    }

    #[test]
    fn prequant_flip_rate_within_kappa() {
        let m = 100_000;
        let f = generate_frame(m, 4, &[0.0; 4], 0.5, 31).unwrap();
        let x = [0.0; 4];
        let clean = observe(&x, &f).unwrap();
        let noisy = gaussian_prequant(&x, &f, 0.5, 32).unwrap();
        let rate = hamming(&clean, &noisy).unwrap();
        let kappa = kappa_n(0.5, 1.0, 4, 0.0).unwrap();
        assert!((kappa - 0.5f64.sqrt()).abs() < 1e-12);
        let se = (rate * (1.0 - rate) / m as f64).sqrt();
        assert!(rate <= kappa + 3.0 * se, "rate {rate} kappa {kappa}");
    }

    #[test]
    fn small_noise_flip_rate_below_c0_bound() {
        let n = 5;
        let m = 100_000;
        let sigma_z2 = 0.01 / n as f64;
        let f = generate_frame(m, n, &[0.0; 5], 2.0 / n as f64, 41).unwrap();
        let x = [0.3, -0.2, 0.1, 0.4, 0.0];
        let clean = observe(&x, &f).unwrap();
        let noisy = gaussian_prequant(&x, &f, sigma_z2, 42).unwrap();
        let rate = hamming(&clean, &noisy).unwrap();
        assert!(rate <= (0.01f64 / 2.0).sqrt(), "rate {rate}");
    }

    #[test]
    fn perturbed_point_matches_prequant_rate() {
        let m = 100_000;
        let n = 3;
        let f = generate_frame(m, n, &[0.0; 3], 2.0 / 3.0, 51).unwrap();
        let x = [0.4, 0.1, -0.3];
        let clean = observe(&x, &f).unwrap();
        let a = hamming(&clean, &gaussian_prequant(&x, &f, 0.05, 52).unwrap()).unwrap();
        let b = hamming(&clean, &perturbed_point_observe(&x, &f, 0.05, 53).unwrap()).unwrap();
        let se = (a * (1.0 - a) / m as f64 + b * (1.0 - b) / m as f64).sqrt();
        assert!((a - b).abs() <= 3.0 * se, "{a} vs {b}");
    }

    #[test]
    fn perturbation_energy_is_n_sigma2() {
        let n = 4;
        let sigma_z2 = 0.3;
        let sd = f64::sqrt(sigma_z2);
        let mut rng = seed::rng(61);
        let draws = 10_000;
        let total: f64 = (0..draws)
            .map(|_| (0..n).map(|_| (sd * rng.sample::<f64, _>(StandardNormal)).powi(2)).sum::<f64>())
            .sum();
        let mean = total / draws as f64;
        assert!((mean - n as f64 * sigma_z2).abs() <= 0.05 * n as f64 * sigma_z2);
    }

    #[test]
    fn spec_dispatch() {
        let f = generate_frame(200, 2, &[0.0; 2], 1.0, 71).unwrap();
        let x = [0.1, 0.1];
        let clean = observe(&x, &f).unwrap();
        let spec = NoiseSpec::RandomFlip { fraction: 0.05, seed: 2 };
        assert_eq!(hamming(&clean, &spec.observe(&x, &f).unwrap()).unwrap(), 0.05);
        assert!(NoiseSpec::GaussianPrequant { variance: -1.0, seed: 0 }.validate().is_err());
        assert_eq!(spec.kind(), "random_flip");
    }
}
