//! Experiment orchestration behind the `pairloc` binary.
//!
//! An experiment expands a config into independent trials, runs them on the
//! rayon pool, sorts the records by trial and aggregates them into a table.
//! Trial `i` uses the seed `trial_seed(seed, i)`; the truth, the landmarks
//! and the noise are drawn from separate streams of that seed, so one trial
//! can be rerun in isolation.

pub mod config;
mod plot;
mod validate;

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub use config::{Experiment, ExperimentConfig, NoiseKind, RawConfig};
pub use plot::emit_plot_data;
pub use validate::{lemma_suite, LemmaCheck};

use crate::adaptive::{build_catalog_schedule, build_schedule, catalog_schedule_variance, run_adaptive, ItemCatalog, StageEstimator};
use crate::bounds::standard_reports;
use crate::error::{Error, Result};
use crate::estimators::{estimate_noise_free, estimate_nu_svm, select_nu, EstimateResult, EstimatorConfig, Status};
use crate::linalg::{distance, mean, median, std_error};
use crate::model::{generate_frame, hamming, observe, ComparisonFrame, SignVector};
use crate::noise::NoiseSpec;
use crate::seed::{child_seed, rng, trial_seed};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const TRUTH_STREAM: u64 = 0x7472_7574;
const NOISE_STREAM: u64 = 0x6e6f_6973;
const CATALOG_STREAM: u64 = 0x6361_7461;

/// A rectangular table of already formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the provenance line, the column header and the rows.
    pub fn write_csv<W: Write>(&self, mut out: W, config_hash: &str) -> Result<()> {
        writeln!(out, "# pairloc-version={VERSION}, config-hash={config_hash}")?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// One estimate against a known truth.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub series: String,
    /// Grid value of the sweep this trial belongs to.
    pub x: f64,
    pub trial: usize,
    pub seed: u64,
    pub x_true: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub error: f64,
    /// `d_H(A(x̂), A(x))` against noise-free signs.
    pub hamming_true: f64,
    /// `d_H(A(x̂), Ā(x))` against the signs the estimator saw.
    pub hamming_observed: f64,
    pub rho: Option<f64>,
    pub nu: Option<f64>,
    pub status: String,
    /// Per-stage errors of adaptive runs.
    pub stage_errors: Vec<f64>,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        !(self.status == Status::Converged.as_str() || self.status == Status::MaxIters.as_str())
    }
}

/// Output of one experiment.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub table: Table,
    pub records: Vec<TrialRecord>,
    pub attempts: usize,
    pub failures: usize,
}

impl Report {
    pub fn failure_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.failures as f64 / self.attempts as f64
        }
    }

    pub fn trial_table(&self) -> Table {
        let mut t = Table::new(&[
            "series",
            "x",
            "trial",
            "seed",
            "x_true",
            "x_hat",
            "error",
            "hamming_true",
            "hamming_observed",
            "rho",
            "nu",
            "status",
            "stage_errors",
        ]);
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        for r in &self.records {
            t.push(vec![
                r.series.clone(),
                r.x.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                join(&r.x_true),
                join(&r.x_hat),
                r.error.to_string(),
                r.hamming_true.to_string(),
                r.hamming_observed.to_string(),
                r.rho.map_or_else(String::new, |v| v.to_string()),
                r.nu.map_or_else(String::new, |v| v.to_string()),
                r.status.clone(),
                join(&r.stage_errors),
            ]);
        }
        t
    }
}

/// Aggregate statistics of one `(series, x)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub series: String,
    pub x: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_error: f64,
    pub median_error: f64,
    pub stderr_error: f64,
    pub mean_hamming_true: f64,
    pub mean_hamming_observed: f64,
    pub rho_nonpositive: usize,
    pub mean_nu: Option<f64>,
}

pub const AGGREGATE_COLUMNS: [&str; 11] = [
    "series",
    "x",
    "trials",
    "failures",
    "mean_error",
    "median_error",
    "stderr_error",
    "mean_hamming_true",
    "mean_hamming_observed",
    "rho_nonpositive",
    "mean_nu",
];

/// Groups records by `(series, x)` in order of first appearance. Failed runs
/// are counted but left out of the error statistics.
pub fn aggregate(records: &[TrialRecord]) -> Vec<Aggregate> {
    let mut keys: Vec<(String, f64)> = Vec::new();
    for r in records {
        if !keys.iter().any(|(s, x)| *s == r.series && x.to_bits() == r.x.to_bits()) {
            keys.push((r.series.clone(), r.x));
        }
    }
    keys.into_iter()
        .map(|(series, x)| {
            let group: Vec<&TrialRecord> = records.iter().filter(|r| r.series == series && r.x.to_bits() == x.to_bits()).collect();
            let ok: Vec<&TrialRecord> = group.iter().copied().filter(|r| !r.failed()).collect();
            let errors: Vec<f64> = ok.iter().map(|r| r.error).collect();
            let nus: Vec<f64> = ok.iter().filter_map(|r| r.nu).collect();
            Aggregate {
                series,
                x,
                trials: group.len(),
                failures: group.len() - ok.len(),
                mean_error: mean(&errors),
                median_error: median(&errors),
                stderr_error: std_error(&errors),
                mean_hamming_true: mean(&ok.iter().map(|r| r.hamming_true).collect::<Vec<_>>()),
                mean_hamming_observed: mean(&ok.iter().map(|r| r.hamming_observed).collect::<Vec<_>>()),
                rho_nonpositive: ok.iter().filter(|r| r.rho.is_some_and(|v| v <= 0.0)).count(),
                mean_nu: (!nus.is_empty()).then(|| mean(&nus)),
            }
        })
        .collect()
}

fn aggregate_table(records: &[TrialRecord]) -> Table {
    let mut t = Table::new(&AGGREGATE_COLUMNS);
    for a in aggregate(records) {
        t.push(vec![
            a.series,
            a.x.to_string(),
            a.trials.to_string(),
            a.failures.to_string(),
            a.mean_error.to_string(),
            a.median_error.to_string(),
            a.stderr_error.to_string(),
            a.mean_hamming_true.to_string(),
            a.mean_hamming_observed.to_string(),
            a.rho_nonpositive.to_string(),
            a.mean_nu.map_or_else(String::new, |v| v.to_string()),
        ]);
    }
    t
}

fn report_from(records: Vec<TrialRecord>) -> Report {
    let failures = records.iter().filter(|r| r.failed()).count();
    Report { table: aggregate_table(&records), attempts: records.len(), failures, records }
}

/// Uniform direction scaled to `norm`.
pub fn true_point(n: usize, norm: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    loop {
        let g: Vec<f64> = (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let len = crate::linalg::norm(&g);
        if len > 0.0 {
            return g.iter().map(|v| v * norm / len).collect();
        }
    }
}

/// Truth of trial `index` for a config seed.
pub fn trial_truth(config: &ExperimentConfig, index: usize) -> Vec<f64> {
    true_point(config.n, config.x_norm, child_seed(trial_seed(config.seed, index as u64), TRUTH_STREAM))
}

fn frame_or_empty(m: usize, n: usize, variance: f64, seed: u64) -> Result<ComparisonFrame> {
    if m == 0 {
        ComparisonFrame::from_hyperplanes(n, Vec::new(), Vec::new())
    } else {
        generate_frame(m, n, &vec![0.0; n], variance, seed)
    }
}

fn hamming_or_zero(a: &SignVector, b: &SignVector) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        hamming(a, b).unwrap_or(1.0)
    }
}

struct Outcome<'a> {
    series: &'a str,
    x: f64,
    trial: usize,
    seed: u64,
    x_true: Vec<f64>,
    nu: Option<f64>,
}

impl Outcome<'_> {
    fn record(self, frame: &ComparisonFrame, clean: &SignVector, seen: &SignVector, est: Result<EstimateResult>) -> TrialRecord {
        let n = self.x_true.len();
        let (x_hat, rho, status) = match est {
            Ok(e) => (e.x_hat, e.rho, e.status.as_str().to_string()),
            Err(Error::Infeasible { .. }) => (vec![0.0; n], None, Status::Infeasible.as_str().to_string()),
            Err(e) => (vec![0.0; n], None, format!("error: {e}")),
        };
        let est_signs = observe(&x_hat, frame).unwrap_or_else(|_| clean.clone());
        TrialRecord {
            series: self.series.to_string(),
            x: self.x,
            trial: self.trial,
            seed: self.seed,
            error: distance(&x_hat, &self.x_true),
            hamming_true: hamming_or_zero(&est_signs, clean),
            hamming_observed: hamming_or_zero(&est_signs, seen),
            x_true: self.x_true,
            x_hat,
            rho,
            nu: self.nu,
            status,
            stage_errors: Vec::new(),
        }
    }
}

/// Noise-free estimation error as a function of the landmark variance.
pub fn run_sigma_sweep(config: &ExperimentConfig) -> Result<Report> {
    let n = config.n;
    let mut records = Vec::new();
    for &sigma2 in &config.sigma2_grid {
        let batch: Vec<TrialRecord> = (0..config.trials)
            .into_par_iter()
            .map(|i| -> Result<TrialRecord> {
                let s = trial_seed(config.seed, i as u64);
                let x_true = trial_truth(config, i);
                let frame = frame_or_empty(config.m, n, sigma2, s)?;
                let signs = observe(&x_true, &frame)?;
                let est = estimate_noise_free(&frame, &signs, config.r, config.estimator.solver_tol);
                let out = Outcome { series: "noise_free", x: sigma2, trial: i, seed: s, x_true, nu: None };
                Ok(out.record(&frame, &signs, &signs, est))
            })
            .collect::<Result<_>>()?;
        records.extend(batch);
    }
    Ok(report_from(records))
}

fn noise_spec(kind: NoiseKind, level: f64, seed: u64) -> NoiseSpec {
    match kind {
        NoiseKind::GaussianPrequant => NoiseSpec::GaussianPrequant { variance: level, seed },
        NoiseKind::PerturbedPoint => NoiseSpec::PerturbedPoint { variance: level, seed },
        NoiseKind::RandomFlip => NoiseSpec::RandomFlip { fraction: level, seed },
        NoiseKind::AdversarialFlip => NoiseSpec::AdversarialFlip { fraction: level },
    }
}

fn kind_label(kind: NoiseKind) -> &'static str {
    noise_spec(kind, 0.0, 0).kind()
}

/// ν-SVM estimation under one noise family across noise levels.
///
/// Unless `estimator.nu` is fixed, each trial sets `ν = min(2κ, 1)` with `κ`
/// the fraction of signs the noise actually changed.
pub fn run_noise_experiment(config: &ExperimentConfig) -> Result<Report> {
    let kind = config.noise_kind.ok_or_else(|| Error::Config("noise experiment without a noise kind".into()))?;
    let n = config.n;
    let variance = 2.0 * config.r * config.r / n as f64;
    let mut records = Vec::new();
    for &level in &config.noise_levels {
        let batch: Vec<TrialRecord> = (0..config.trials)
            .into_par_iter()
            .map(|i| -> Result<TrialRecord> {
                let s = trial_seed(config.seed, i as u64);
                let x_true = trial_truth(config, i);
                let frame = generate_frame(config.m, n, &vec![0.0; n], variance, s)?;
                let clean = observe(&x_true, &frame)?;
                let noisy = noise_spec(kind, level, child_seed(s, NOISE_STREAM)).observe(&x_true, &frame)?;
                let nu = config.fixed_nu.unwrap_or_else(|| select_nu(hamming(&clean, &noisy).unwrap_or(0.0)));
                let est_cfg = EstimatorConfig { nu, ..config.estimator.clone() };
                let est = estimate_nu_svm(&frame, &noisy, &est_cfg);
                let out = Outcome { series: kind_label(kind), x: level, trial: i, seed: s, x_true, nu: Some(nu) };
                Ok(out.record(&frame, &clean, &noisy, est))
            })
            .collect::<Result<_>>()?;
        records.extend(batch);
    }
    Ok(report_from(records))
}

fn adaptive_setup(config: &ExperimentConfig) -> Result<(StageEstimator, Option<(NoiseKind, f64)>)> {
    match config.noise_kind {
        None => Ok((StageEstimator::NoiseFree { solver_tol: config.estimator.solver_tol }, None)),
        Some(kind) => {
            let nu = config
                .fixed_nu
                .ok_or_else(|| Error::Config("noisy adaptive runs need `estimator.nu`".into()))?;
            if config.noise_levels.len() != 1 {
                return Err(Error::Config("noisy adaptive runs take a single `noise.level`".into()));
            }
            let est = StageEstimator::NuSvm(EstimatorConfig { nu, ..config.estimator.clone() });
            Ok((est, Some((kind, config.noise_levels[0]))))
        }
    }
}

fn adaptive_record(
    series: &str,
    total_m: usize,
    trial: usize,
    seed: u64,
    x_true: Vec<f64>,
    run: crate::adaptive::AdaptiveRun,
) -> TrialRecord {
    let n = x_true.len();
    let x_hat = run.final_estimate(n);
    let status = match (&run.failure, run.stages.last()) {
        (Some(Error::Infeasible { .. }), _) => Status::Infeasible.as_str().to_string(),
        (Some(e), _) => format!("error: {e}"),
        (None, Some(s)) => s.result.status.as_str().to_string(),
        (None, None) => Status::Infeasible.as_str().to_string(),
    };
    TrialRecord {
        series: series.to_string(),
        x: total_m as f64,
        trial,
        seed,
        error: distance(&x_hat, &x_true),
        hamming_true: f64::NAN,
        hamming_observed: f64::NAN,
        rho: run.stages.last().and_then(|s| s.result.rho),
        nu: None,
        status,
        stage_errors: run.stages.iter().filter_map(|s| s.error).collect(),
        x_true,
        x_hat,
    }
}

/// Final error against total budget for each stage count.
pub fn run_adaptive_experiment(config: &ExperimentConfig) -> Result<Report> {
    let (estimator, noise) = adaptive_setup(config)?;
    let n = config.n;
    let catalog_mode = config.experiment == Experiment::AdaptiveCatalog;
    let mut records = Vec::new();
    for &t in &config.stages {
        let series = format!("t={t}");
        for &total_m in config.total_m_grid.iter().filter(|&&m| m >= t) {
            let batch: Vec<TrialRecord> = (0..config.trials)
                .into_par_iter()
                .map(|i| -> Result<TrialRecord> {
                    let s = trial_seed(config.seed, i as u64);
                    let x_true = trial_truth(config, i);
                    let spec = noise.map(|(kind, level)| noise_spec(kind, level, child_seed(s, NOISE_STREAM)));
                    let run = if catalog_mode {
                        let catalog = ItemCatalog::uniform_ball(config.catalog_items, n, config.catalog_radius, child_seed(s, CATALOG_STREAM))?;
                        let sigma0 = catalog_schedule_variance(&catalog)?;
                        let schedule = build_catalog_schedule(config.r, n, t, total_m, config.rounding, sigma0, config.dyadic_target)?;
                        run_adaptive(&x_true, &schedule, &estimator, spec.as_ref(), Some(&catalog), s)
                    } else {
                        let schedule = build_schedule(config.r, n, t, total_m, config.rounding)?;
                        run_adaptive(&x_true, &schedule, &estimator, spec.as_ref(), None, s)
                    };
                    Ok(adaptive_record(&series, total_m, i, s, x_true, run))
                })
                .collect::<Result<_>>()?;
            records.extend(batch);
        }
    }
    let mut report = report_from(records);
    // Hamming columns carry no meaning across stages
    for row in &mut report.table.rows {
        row[7].clear();
        row[8].clear();
    }
    Ok(report)
}

/// Evaluates every closed-form bound at the configured point.
pub fn run_bounds(config: &ExperimentConfig) -> Result<Report> {
    let mut t = Table::new(&["name", "value", "inputs", "formula"]);
    for rep in standard_reports(&config.bounds)? {
        let inputs = rep.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        t.push(vec![rep.name.to_string(), format!("{:.12e}", rep.value), inputs, format!("\"{}\"", rep.formula)]);
    }
    Ok(Report { table: t, ..Default::default() })
}

/// Runs the Monte Carlo lemma suite.
pub fn run_validate(config: &ExperimentConfig) -> Result<Report> {
    let checks = lemma_suite(config.validate_trials, config.seed)?;
    let mut t = Table::new(&["check", "params", "estimate", "bound", "std_error", "slack", "pass"]);
    for c in &checks {
        t.push(vec![
            c.check.to_string(),
            c.params.clone(),
            c.estimate.to_string(),
            c.bound.to_string(),
            c.std_error.to_string(),
            c.slack.to_string(),
            c.pass.to_string(),
        ]);
    }
    Ok(Report { table: t, ..Default::default() })
}

/// Dispatches on `config.experiment`.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    match config.experiment {
        Experiment::SigmaSweep => run_sigma_sweep(config),
        Experiment::NoiseGaussian | Experiment::NoiseRandom | Experiment::NoiseAdversarial => run_noise_experiment(config),
        Experiment::AdaptiveStages | Experiment::AdaptiveCatalog => run_adaptive_experiment(config),
        Experiment::Validate => run_validate(config),
        Experiment::Bounds => run_bounds(config),
    }
}
