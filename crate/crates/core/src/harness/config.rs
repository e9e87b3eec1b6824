//! Line-oriented experiment configuration.
//!
//! ```text
//! # comment
//! experiment = noise_random
//! n = 5
//! noise.levels = 0, 0.05, 0.1   # lists are comma separated
//! ```
//!
//! Keys are fixed; an unknown or repeated key is an error so typos never
//! silently fall back to defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::adaptive::{DyadicTarget, RoundingPreference};
use crate::bounds::BoundInputs;
use crate::error::{Error, Result};
use crate::estimators::EstimatorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SigmaSweep,
    NoiseGaussian,
    NoiseRandom,
    NoiseAdversarial,
    AdaptiveStages,
    AdaptiveCatalog,
    Validate,
    Bounds,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::SigmaSweep,
        Experiment::NoiseGaussian,
        Experiment::NoiseRandom,
        Experiment::NoiseAdversarial,
        Experiment::AdaptiveStages,
        Experiment::AdaptiveCatalog,
        Experiment::Validate,
        Experiment::Bounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::SigmaSweep => "sigma_sweep",
            Experiment::NoiseGaussian => "noise_gaussian",
            Experiment::NoiseRandom => "noise_random",
            Experiment::NoiseAdversarial => "noise_adversarial",
            Experiment::AdaptiveStages => "adaptive_stages",
            Experiment::AdaptiveCatalog => "adaptive_catalog",
            Experiment::Validate => "validate",
            Experiment::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Noise family used by the adaptive experiments; the noise experiments
/// imply theirs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    GaussianPrequant,
    RandomFlip,
    AdversarialFlip,
    PerturbedPoint,
}

impl FromStr for NoiseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gaussian_prequant" => Ok(NoiseKind::GaussianPrequant),
            "random_flip" => Ok(NoiseKind::RandomFlip),
            "adversarial_flip" => Ok(NoiseKind::AdversarialFlip),
            "perturbed_point" => Ok(NoiseKind::PerturbedPoint),
            _ => Err(format!("unknown noise kind `{s}`")),
        }
    }
}

const KEYS: &[&str] = &[
    "experiment",
    "n",
    "R",
    "m",
    "trials",
    "seed",
    "x_norm",
    "sigma2_grid",
    "output",
    "estimator.nu",
    "estimator.chi",
    "estimator.max_outer_iters",
    "estimator.convergence_tol",
    "estimator.solver_tol",
    "estimator.trust_box",
    "noise.kind",
    "noise.level",
    "noise.levels",
    "adaptive.stages",
    "adaptive.total_m",
    "adaptive.rounding",
    "adaptive.dyadic_target",
    "catalog.items",
    "catalog.radius",
    "validate.trials",
    "bounds.eps",
    "bounds.eta",
    "bounds.m",
    "bounds.kappa",
    "bounds.sigma_z2",
    "bounds.x_norm",
    "bounds.perturb_norm",
    "bounds.zeta",
    "bounds.constant",
];

/// Parsed `key = value` pairs with their source lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: line_no, msg: format!("expected `key = value`, got `{line}`") })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::Parse { line: line_no, msg: "empty key".into() });
            }
            if !KEYS.contains(&key) {
                return Err(Error::Parse { line: line_no, msg: format!("unknown key `{key}`") });
            }
            if entries.insert(key.to_string(), (value.to_string(), line_no)).is_some() {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (value.into(), 0));
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| Error::Parse { line: *line, msg: format!("`{key}`: {e}") }),
        }
    }

    fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<T>().map_err(|e| Error::Parse { line: *line, msg: format!("`{key}`: {e}") }))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Canonical text: sorted keys, normalized spacing, `output` omitted.
    pub fn canonical(&self) -> String {
        self.entries
            .iter()
            .filter(|(k, _)| k.as_str() != "output")
            .map(|(k, (v, _))| format!("{k} = {v}\n"))
            .collect()
    }

    /// First 16 hex digits of the SHA-256 of [`RawConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub r: f64,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub x_norm: f64,
    pub sigma2_grid: Vec<f64>,
    pub estimator: EstimatorConfig,
    /// `None`: ν is set per trial from the measured flip fraction.
    pub fixed_nu: Option<f64>,
    pub noise_kind: Option<NoiseKind>,
    pub noise_levels: Vec<f64>,
    pub stages: Vec<usize>,
    pub total_m_grid: Vec<usize>,
    pub rounding: RoundingPreference,
    pub dyadic_target: DyadicTarget,
    pub catalog_items: usize,
    pub catalog_radius: f64,
    pub validate_trials: u64,
    pub bounds: BoundInputs,
    pub output: Option<PathBuf>,
    pub hash: String,
}

fn parse_rounding(s: &str) -> std::result::Result<RoundingPreference, String> {
    match s {
        "earlier" => Ok(RoundingPreference::Earlier),
        "later" => Ok(RoundingPreference::Later),
        _ => Err(format!("rounding must be `earlier` or `later`, got `{s}`")),
    }
}

fn parse_dyadic(s: &str) -> std::result::Result<DyadicTarget, String> {
    match s {
        "sigma" => Ok(DyadicTarget::Sigma),
        "sigma2" => Ok(DyadicTarget::Sigma2),
        _ => Err(format!("dyadic_target must be `sigma` or `sigma2`, got `{s}`")),
    }
}

struct Wrapped<T>(T);

impl FromStr for Wrapped<RoundingPreference> {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_rounding(s).map(Wrapped)
    }
}

impl FromStr for Wrapped<DyadicTarget> {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_dyadic(s).map(Wrapped)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    /// Defaults for `experiment`, overridden by `raw`.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let experiment: Experiment = raw
            .get_str("experiment")
            .ok_or_else(|| Error::Config("missing `experiment`".into()))?
            .parse()?;
        use Experiment::*;
        let (n, m, trials, x_norm) = match experiment {
            SigmaSweep => (2, 50, 1000, 1.0),
            NoiseGaussian | NoiseRandom | NoiseAdversarial => (5, 1000, 100, 0.7),
            AdaptiveStages => (3, 0, 200, 0.75),
            AdaptiveCatalog => (3, 0, 50, 0.4),
            Validate | Bounds => (2, 0, 1, 0.0),
        };
        let n = raw.get::<usize>("n")?.unwrap_or(n);
        let r = raw.get::<f64>("R")?.unwrap_or(1.0);
        let mut estimator = EstimatorConfig::new(r, 0.0);
        if let Some(v) = raw.get("estimator.chi")? {
            estimator.chi = v;
        }
        if let Some(v) = raw.get("estimator.max_outer_iters")? {
            estimator.max_outer_iters = v;
        }
        if let Some(v) = raw.get("estimator.convergence_tol")? {
            estimator.convergence_tol = v;
        }
        if let Some(v) = raw.get("estimator.solver_tol")? {
            estimator.solver_tol = v;
        }
        if let Some(v) = raw.get("estimator.trust_box")? {
            estimator.trust_box = v;
        }
        let fixed_nu = raw.get::<f64>("estimator.nu")?;
        if let Some(nu) = fixed_nu {
            estimator.nu = nu;
        }
        let implied_noise = match experiment {
            NoiseGaussian => Some(NoiseKind::GaussianPrequant),
            NoiseRandom => Some(NoiseKind::RandomFlip),
            NoiseAdversarial => Some(NoiseKind::AdversarialFlip),
            _ => None,
        };
        let noise_kind = match raw.get_str("noise.kind") {
            None => implied_noise,
            Some("none") => None,
            Some(_) => raw.get::<NoiseKind>("noise.kind")?,
        };
        if implied_noise.is_some() && noise_kind != implied_noise {
            return Err(Error::Config(format!("`noise.kind` conflicts with experiment `{experiment}`")));
        }
        let default_levels = match experiment {
            NoiseGaussian => vec![0.0, 0.001, 0.01, 0.05],
            NoiseRandom | NoiseAdversarial => vec![0.0, 0.05, 0.10, 0.20],
            _ => vec![0.0],
        };
        let noise_levels = match (raw.get_list::<f64>("noise.levels")?, raw.get::<f64>("noise.level")?) {
            (Some(_), Some(_)) => return Err(Error::Config("give `noise.level` or `noise.levels`, not both".into())),
            (Some(list), None) => list,
            (None, Some(v)) => vec![v],
            (None, None) => default_levels,
        };
        let bd = BoundInputs::default();
        let bounds = BoundInputs {
            r,
            n,
            eps: raw.get("bounds.eps")?.unwrap_or(bd.eps),
            eta: raw.get("bounds.eta")?.unwrap_or(bd.eta),
            m: raw.get("bounds.m")?.unwrap_or(bd.m),
            kappa: raw.get("bounds.kappa")?.unwrap_or(bd.kappa),
            sigma_z2: raw.get("bounds.sigma_z2")?.unwrap_or(bd.sigma_z2),
            x_norm: raw.get("bounds.x_norm")?.unwrap_or(bd.x_norm.min(r)),
            perturb_norm: raw.get("bounds.perturb_norm")?.unwrap_or(bd.perturb_norm),
            zeta: raw.get("bounds.zeta")?.unwrap_or(bd.zeta),
            constant: raw.get("bounds.constant")?.unwrap_or(bd.constant),
        };
        let default_stages = match experiment {
            AdaptiveCatalog => vec![1, 4],
            _ => vec![1, 2, 4, 10],
        };
        let default_total: Vec<usize> = (4..=12).map(|k| 1usize << k).collect();
        let cfg = ExperimentConfig {
            experiment,
            n,
            r,
            m: raw.get("m")?.unwrap_or(m),
            trials: raw.get("trials")?.unwrap_or(trials),
            seed: raw.get("seed")?.unwrap_or(1),
            x_norm: raw.get("x_norm")?.unwrap_or(x_norm * r),
            sigma2_grid: raw.get_list("sigma2_grid")?.unwrap_or_else(|| vec![0.01, 0.1, 1.0, 10.0, 100.0]),
            estimator,
            fixed_nu,
            noise_kind,
            noise_levels,
            stages: raw.get_list("adaptive.stages")?.unwrap_or(default_stages),
            total_m_grid: raw.get_list("adaptive.total_m")?.unwrap_or(default_total),
            rounding: raw
                .get::<Wrapped<RoundingPreference>>("adaptive.rounding")?
                .map(|w| w.0)
                .unwrap_or(if experiment == AdaptiveCatalog { RoundingPreference::Later } else { RoundingPreference::Earlier }),
            dyadic_target: raw.get::<Wrapped<DyadicTarget>>("adaptive.dyadic_target")?.map(|w| w.0).unwrap_or_default(),
            catalog_items: raw.get("catalog.items")?.unwrap_or(10_000),
            catalog_radius: raw.get("catalog.radius")?.unwrap_or(1.0),
            validate_trials: raw.get("validate.trials")?.unwrap_or(1_000_000),
            bounds,
            output: raw.get_str("output").map(PathBuf::from),
            hash: raw.hash(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return bad("`n` must be at least 1".into());
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return bad(format!("`R` must be positive, got {}", self.r));
        }
        if self.trials == 0 {
            return bad("`trials` must be at least 1".into());
        }
        if !(self.x_norm >= 0.0 && self.x_norm <= self.r) {
            return bad(format!("`x_norm` must lie in [0, R], got {}", self.x_norm));
        }
        self.estimator.validate().map_err(|e| Error::Config(e.to_string()))?;
        match self.experiment {
            Experiment::SigmaSweep => {
                if self.sigma2_grid.is_empty() || self.sigma2_grid.iter().any(|v| !(*v > 0.0)) {
                    return bad("`sigma2_grid` needs positive values".into());
                }
            }
            Experiment::NoiseGaussian | Experiment::NoiseRandom | Experiment::NoiseAdversarial => {
                if self.m == 0 {
                    return bad("`m` must be at least 1".into());
                }
                if self.noise_levels.is_empty() || self.noise_levels.iter().any(|v| !(*v >= 0.0)) {
                    return bad("`noise.levels` needs nonnegative values".into());
                }
                if self.experiment != Experiment::NoiseGaussian && self.noise_levels.iter().any(|v| *v > 1.0) {
                    return bad("flip fractions must not exceed 1".into());
                }
            }
            Experiment::AdaptiveStages | Experiment::AdaptiveCatalog => {
                if self.stages.is_empty() || self.stages.contains(&0) {
                    return bad("`adaptive.stages` needs values of at least 1".into());
                }
                if self.total_m_grid.is_empty() || self.total_m_grid.contains(&0) {
                    return bad("`adaptive.total_m` needs positive values".into());
                }
                if self.experiment == Experiment::AdaptiveCatalog && self.catalog_items < 2 {
                    return bad("`catalog.items` must be at least 2".into());
                }
            }
            Experiment::Validate => {
                if self.validate_trials == 0 {
                    return bad("`validate.trials` must be positive".into());
                }
            }
            Experiment::Bounds => {}
        }
        Ok(())
    }
}
