//! Multi-stage localization.
//!
//! Stage `ℓ` draws its landmark pairs around the previous estimate with a
//! radius halved relative to stage `ℓ − 1`, measures, and solves for the
//! offset from the previous estimate. A fixed-catalog variant replaces every
//! sampled landmark by its nearest catalog item.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::estimators::{estimate_noise_free, estimate_nu_svm, EstimateResult, EstimatorConfig};
use crate::linalg::{add, distance, norm_sq};
use crate::model::{derive_frame, generate_frame, observe, ComparisonFrame, ItemPair, DEGENERATE_PAIR_TOL, MAX_PAIR_REDRAWS};
use crate::noise::NoiseSpec;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingPreference {
    Earlier,
    Later,
}

/// What "reduced dyadically" halves at each stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DyadicTarget {
    /// Halve `σ`, so `σ²` shrinks by 4.
    Sigma,
    /// Halve `σ²`.
    #[default]
    Sigma2,
}

impl DyadicTarget {
    pub fn factor(self, stage: usize) -> f64 {
        match self {
            DyadicTarget::Sigma => 0.25f64.powi(stage as i32),
            DyadicTarget::Sigma2 => 0.5f64.powi(stage as i32),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub radius: f64,
    pub variance: f64,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageSchedule {
    pub dim: usize,
    pub stages: Vec<Stage>,
    pub total_m: usize,
    pub rounding: RoundingPreference,
}

fn split_budget(total_m: usize, t: usize, pref: RoundingPreference) -> Vec<usize> {
    let base = total_m / t;
    let extra = total_m % t;
    (0..t)
        .map(|l| {
            let gets_extra = match pref {
                RoundingPreference::Earlier => l < extra,
                RoundingPreference::Later => l >= t - extra,
            };
            base + usize::from(gets_extra)
        })
        .collect()
}

/// Equal budgets, radius `R·2^{−ℓ}` and variance `2R_ℓ²/n` for stage `ℓ`.
pub fn build_schedule(r: f64, n: usize, t: usize, total_m: usize, pref: RoundingPreference) -> Result<StageSchedule> {
    if !(r.is_finite() && r > 0.0) || n == 0 {
        return Err(Error::invalid("R must be positive and n at least 1"));
    }
    if t == 0 || total_m < t {
        return Err(Error::invalid(format!("need t >= 1 and total_m >= t, got t={t}, total_m={total_m}")));
    }
    let stages = split_budget(total_m, t, pref)
        .into_iter()
        .enumerate()
        .map(|(l, budget)| {
            let radius = r * 0.5f64.powi(l as i32);
            Stage { radius, variance: 2.0 * radius * radius / n as f64, budget }
        })
        .collect();
    Ok(StageSchedule { dim: n, stages, total_m, rounding: pref })
}

/// Schedule for the catalog variant: variances start at `sigma0_sq` and
/// shrink per `target`; radii still halve.
pub fn build_catalog_schedule(
    r: f64,
    n: usize,
    t: usize,
    total_m: usize,
    pref: RoundingPreference,
    sigma0_sq: f64,
    target: DyadicTarget,
) -> Result<StageSchedule> {
    if !(sigma0_sq.is_finite() && sigma0_sq > 0.0) {
        return Err(Error::invalid(format!("initial variance must be positive, got {sigma0_sq}")));
    }
    let mut schedule = build_schedule(r, n, t, total_m, pref)?;
    for (l, stage) in schedule.stages.iter_mut().enumerate() {
        stage.variance = sigma0_sq * target.factor(l);
    }
    Ok(schedule)
}

/// A fixed dataset of items, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemCatalog {
    dim: usize,
    items: Vec<f64>,
}

impl ItemCatalog {
    pub fn new(items: Vec<Vec<f64>>) -> Result<Self> {
        let dim = items.first().map(Vec::len).ok_or_else(|| Error::invalid("catalog must not be empty"))?;
        if dim == 0 {
            return Err(Error::invalid("catalog items must have dimension at least 1"));
        }
        let mut flat = Vec::with_capacity(items.len() * dim);
        for item in &items {
            if item.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: item.len() });
            }
            flat.extend_from_slice(item);
        }
        Ok(ItemCatalog { dim, items: flat })
    }

    /// `count` items uniform in the ball of radius `radius`.
    pub fn uniform_ball(count: usize, n: usize, radius: f64, seed: u64) -> Result<Self> {
        if count == 0 || n == 0 || !(radius > 0.0) {
            return Err(Error::invalid("uniform_ball needs count, n and radius positive"));
        }
        let mut rng = seed::rng(seed);
        let items = (0..count)
            .map(|_| {
                let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let len = norm_sq(&g).sqrt();
                let u: f64 = rng.random();
                let rad = radius * u.powf(1.0 / n as f64);
                g.iter().map(|v| v * rad / len).collect()
            })
            .collect();
        ItemCatalog::new(items)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, i: usize) -> &[f64] {
        &self.items[i * self.dim..(i + 1) * self.dim]
    }

    /// Index of the catalog item closest to `point`; ties go to the lower
    /// index.
    pub fn nearest(&self, point: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for i in 0..self.len() {
            let d: f64 = self.item(i).iter().zip(point).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// Coordinate-averaged population variance of the catalog.
pub fn catalog_schedule_variance(catalog: &ItemCatalog) -> Result<f64> {
    let n = catalog.dim();
    let count = catalog.len() as f64;
    let mut total = 0.0;
    for j in 0..n {
        let mean = (0..catalog.len()).map(|i| catalog.item(i)[j]).sum::<f64>() / count;
        total += (0..catalog.len()).map(|i| (catalog.item(i)[j] - mean).powi(2)).sum::<f64>() / count;
    }
    let variance = total / n as f64;
    if !(variance > 0.0) {
        return Err(Error::invalid("catalog has zero variance"));
    }
    Ok(variance)
}

/// Replaces each sampled point by its nearest catalog item. A pair whose two
/// points map to the same item is redrawn from `N(mean, variance·I)` up to
/// [`MAX_PAIR_REDRAWS`] times.
pub fn nearest_item_pairs(
    sampled: &[ItemPair],
    catalog: &ItemCatalog,
    mean: &[f64],
    variance: f64,
    seed: u64,
) -> Result<Vec<ItemPair>> {
    if mean.len() != catalog.dim() {
        return Err(Error::DimensionMismatch { expected: catalog.dim(), found: mean.len() });
    }
    let sd = variance.sqrt();
    let mut rng = seed::rng(seed);
    let mut out = Vec::with_capacity(sampled.len());
    for (idx, pair) in sampled.iter().enumerate() {
        if pair.dim() != catalog.dim() {
            return Err(Error::DimensionMismatch { expected: catalog.dim(), found: pair.dim() });
        }
        let (mut i, mut j) = (catalog.nearest(&pair.p), catalog.nearest(&pair.q));
        let mut attempt = 0;
        while i == j {
            attempt += 1;
            if attempt > MAX_PAIR_REDRAWS {
                return Err(Error::DegeneratePair(format!(
                    "pair {idx} mapped to a single catalog item on {attempt} consecutive draws"
                )));
            }
            let p: Vec<f64> = mean.iter().map(|m| m + sd * rng.sample::<f64, _>(StandardNormal)).collect();
            let q: Vec<f64> = mean.iter().map(|m| m + sd * rng.sample::<f64, _>(StandardNormal)).collect();
            i = catalog.nearest(&p);
            j = catalog.nearest(&q);
        }
        let mapped = ItemPair { p: catalog.item(i).to_vec(), q: catalog.item(j).to_vec() };
        if mapped.separation() < DEGENERATE_PAIR_TOL {
            return Err(Error::DegeneratePair(format!("catalog items {i} and {j} coincide")));
        }
        out.push(mapped);
    }
    Ok(out)
}

/// [`nearest_item_pairs`] followed by frame derivation.
pub fn nearest_item_frame(
    sampled: &[ItemPair],
    catalog: &ItemCatalog,
    mean: &[f64],
    variance: f64,
    seed: u64,
) -> Result<ComparisonFrame> {
    derive_frame(&nearest_item_pairs(sampled, catalog, mean, variance, seed)?)
}

/// Per-stage estimator.
#[derive(Debug, Clone, PartialEq)]
pub enum StageEstimator {
    NoiseFree { solver_tol: f64 },
    /// `config.r` is replaced by the stage radius.
    NuSvm(EstimatorConfig),
}

impl StageEstimator {
    pub fn estimate(&self, frame: &ComparisonFrame, signs: &crate::model::SignVector, radius: f64) -> Result<EstimateResult> {
        match self {
            StageEstimator::NoiseFree { solver_tol } => estimate_noise_free(frame, signs, radius, *solver_tol),
            StageEstimator::NuSvm(cfg) => estimate_nu_svm(frame, signs, &EstimatorConfig { r: radius, ..cfg.clone() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub stage: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    pub variance: f64,
    pub budget: usize,
    pub estimate: Vec<f64>,
    pub error: Option<f64>,
    pub result: EstimateResult,
}

#[derive(Debug)]
pub struct AdaptiveRun {
    pub stages: Vec<StageRecord>,
    /// Set when a stage failed; `stages` then holds the completed prefix.
    pub failure: Option<Error>,
}

impl AdaptiveRun {
    /// Estimate after the last completed stage (the origin if none).
    pub fn final_estimate(&self, n: usize) -> Vec<f64> {
        self.stages.last().map_or_else(|| vec![0.0; n], |s| s.estimate.clone())
    }

    pub fn write_trajectory_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.stages.first().map_or(0, |s| s.center.len());
        let mut header = vec!["stage".to_string()];
        header.extend((0..n).map(|j| format!("center_{j}")));
        header.extend(["radius", "variance", "budget", "error"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for s in &self.stages {
            let mut row = vec![s.stage.to_string()];
            row.extend(s.center.iter().map(|v| v.to_string()));
            row.push(s.radius.to_string());
            row.push(s.variance.to_string());
            row.push(s.budget.to_string());
            row.push(s.error.map_or_else(String::new, |e| e.to_string()));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Runs every stage of `schedule` against the truth `x_true`.
///
/// Stage `ℓ` uses the stream `child_seed(seed, ℓ)` for its landmarks and the
/// noise seed `child_seed(noise_seed, ℓ)`, so a one-stage schedule reproduces the
/// non-adaptive pipeline at `seed` exactly. With `catalog`, sampled
/// landmarks are snapped to catalog items.
pub fn run_adaptive(
    x_true: &[f64],
    schedule: &StageSchedule,
    estimator: &StageEstimator,
    noise: Option<&NoiseSpec>,
    catalog: Option<&ItemCatalog>,
    seed: u64,
) -> AdaptiveRun {
    let n = schedule.dim;
    let mut center = vec![0.0; n];
    let mut stages = Vec::with_capacity(schedule.stages.len());
    for (l, stage) in schedule.stages.iter().enumerate() {
        let stage_noise = noise.map(|spec| spec.reseeded(seed::child_seed(spec.seed().unwrap_or(0), l as u64)));
        let outcome = run_stage(x_true, &center, stage, estimator, stage_noise.as_ref(), catalog, seed::child_seed(seed, l as u64));
        match outcome {
            Ok(result) => {
                let estimate = add(&center, &result.x_hat);
                let error = (x_true.len() == n).then(|| distance(&estimate, x_true));
                stages.push(StageRecord {
                    stage: l,
                    center: center.clone(),
                    radius: stage.radius,
                    variance: stage.variance,
                    budget: stage.budget,
                    estimate: estimate.clone(),
                    error,
                    result,
                });
                center = estimate;
            }
            Err(e) => return AdaptiveRun { stages, failure: Some(e) },
        }
    }
    AdaptiveRun { stages, failure: None }
}

fn run_stage(
    x_true: &[f64],
    center: &[f64],
    stage: &Stage,
    estimator: &StageEstimator,
    noise: Option<&NoiseSpec>,
    catalog: Option<&ItemCatalog>,
    stage_seed: u64,
) -> Result<EstimateResult> {
    let n = center.len();
    let frame = match catalog {
        None => generate_frame(stage.budget, n, center, stage.variance, stage_seed)?,
        Some(cat) => {
            let sampled = crate::model::sample_pairs(stage.budget, n, center, stage.variance, stage_seed)?;
            nearest_item_frame(&sampled, cat, center, stage.variance, seed::child_seed(stage_seed, 1))?
        }
    };
    let signs = match noise {
        None => observe(x_true, &frame)?,
        Some(spec) => spec.observe(x_true, &frame)?,
    };
    let local = frame.recentered(center)?;
    estimator.estimate(&local, &signs, stage.radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_rounding() {
        let b = |pref| build_schedule(1.0, 2, 3, 10, pref).unwrap().stages.iter().map(|s| s.budget).collect::<Vec<_>>();
        assert_eq!(b(RoundingPreference::Earlier), vec![4, 3, 3]);
        assert_eq!(b(RoundingPreference::Later), vec![3, 3, 4]);
        assert!(build_schedule(1.0, 2, 4, 3, RoundingPreference::Earlier).is_err());
    }

    #[test]
    fn single_stage_schedule() {
        let s = build_schedule(2.0, 4, 1, 77, RoundingPreference::Earlier).unwrap();
        assert_eq!(s.stages, vec![Stage { radius: 2.0, variance: 2.0, budget: 77 }]);
    }

    #[test]
    fn catalog_variance_examples() {
        let cat = ItemCatalog::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(catalog_schedule_variance(&cat).unwrap(), 0.5);
        let same = ItemCatalog::new(vec![vec![0.3, 0.1]; 4]).unwrap();
        assert!(catalog_schedule_variance(&same).is_err());
    }

    #[test]
    fn nearest_mapping() {
        let cat = ItemCatalog::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let pair = ItemPair::new(vec![0.9, 0.1], vec![-0.8, 0.2]).unwrap();
        let mapped = nearest_item_pairs(&[pair], &cat, &[0.0, 0.0], 1.0, 3).unwrap();
        assert_eq!(mapped[0].p, vec![1.0, 0.0]);
        assert_eq!(mapped[0].q, vec![-1.0, 0.0]);
    }

    #[test]
    fn collision_triggers_redraw() {
        let cat = ItemCatalog::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let pair = ItemPair::new(vec![0.9, 0.1], vec![0.8, 0.2]).unwrap();
        // the redraw has a fair chance of splitting the pair
        let mapped = nearest_item_pairs(std::slice::from_ref(&pair), &cat, &[0.0, 0.0], 1.0, 3).unwrap();
        assert_ne!(mapped[0].p, mapped[0].q);
        // with every redraw centred far on one side the cap is hit
        let err = nearest_item_pairs(&[pair], &cat, &[50.0, 0.0], 1e-4, 3).unwrap_err();
        assert!(matches!(err, Error::DegeneratePair(_)));
    }
}
