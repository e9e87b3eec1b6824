use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pairloc::harness::{self, Experiment, ExperimentConfig, RawConfig};
use pairloc::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "pairloc", version, about = "Localize an ideal point from paired comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment config (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Aggregate CSV destination; per-trial records go to `<out>.trials.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "PAIRLOC_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
#[command(rename_all = "snake_case")]
enum Command {
    SigmaSweep(RunArgs),
    NoiseGaussian(RunArgs),
    NoiseRandom(RunArgs),
    NoiseAdversarial(RunArgs),
    AdaptiveStages(RunArgs),
    AdaptiveCatalog(RunArgs),
    Validate(RunArgs),
    Bounds(RunArgs),
    /// Converts an aggregate CSV into gnuplot columns.
    #[command(name = "plot-data", alias = "plot_data")]
    PlotData {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn open_out(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_config(experiment: Experiment, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RawConfig::default(),
    };
    match raw.get_str("experiment") {
        Some(name) if name != experiment.as_str() => {
            return Err(Error::Config(format!("config is for `{name}`, not `{experiment}`")));
        }
        Some(_) => {}
        None => raw.set("experiment", experiment.as_str()),
    }
    if let Some(seed) = args.seed {
        raw.set("seed", seed.to_string());
    }
    if let Some(out) = &args.out {
        raw.set("output", out.display().to_string());
    }
    ExperimentConfig::from_raw(&raw)
}

fn run_experiment(experiment: Experiment, args: &RunArgs) -> Result<ExitCode, Error> {
    let config = match load_config(experiment, args) {
        Ok(c) => c,
        Err(e @ (Error::Config(_) | Error::Parse { .. } | Error::InvalidParameter(_))) => {
            eprintln!("pairloc: {e}");
            return Ok(ExitCode::from(EXIT_CONFIG));
        }
        Err(e) => return Err(e),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.threads {
        pool = pool.num_threads(k);
    }
    let pool = pool.build().map_err(|e| Error::Config(e.to_string()))?;
    let report = match pool.install(|| harness::run(&config)) {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => {
            eprintln!("pairloc: {e}");
            return Ok(ExitCode::from(EXIT_CONFIG));
        }
        Err(e) => return Err(e),
    };
    let out_path = config.output.as_deref();
    report.table.write_csv(open_out(out_path)?, &config.hash)?;
    if let Some(path) = out_path {
        if !report.records.is_empty() {
            let mut trials = path.as_os_str().to_owned();
            trials.push(".trials.csv");
            report.trial_table().write_csv(open_out(Some(Path::new(&trials)))?, &config.hash)?;
        }
    }
    if report.failure_rate() > 0.5 {
        eprintln!("solver failures in {} of {} runs", report.failures, report.attempts);
        return Ok(ExitCode::from(EXIT_SOLVER));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SigmaSweep(a) => run_experiment(Experiment::SigmaSweep, a),
        Command::NoiseGaussian(a) => run_experiment(Experiment::NoiseGaussian, a),
        Command::NoiseRandom(a) => run_experiment(Experiment::NoiseRandom, a),
        Command::NoiseAdversarial(a) => run_experiment(Experiment::NoiseAdversarial, a),
        Command::AdaptiveStages(a) => run_experiment(Experiment::AdaptiveStages, a),
        Command::AdaptiveCatalog(a) => run_experiment(Experiment::AdaptiveCatalog, a),
        Command::Validate(a) => run_experiment(Experiment::Validate, a),
        Command::Bounds(a) => run_experiment(Experiment::Bounds, a),
        Command::PlotData { csv, out } => File::open(csv)
            .map_err(Error::from)
            .and_then(|f| harness::emit_plot_data(BufReader::new(f), open_out(out.as_deref())?))
            .map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pairloc: {e}");
            ExitCode::FAILURE
        }
    }
}
