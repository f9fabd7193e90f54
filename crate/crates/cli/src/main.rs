//! Experiment runner: reproduces the toolkit's numerical studies at desk
//! scale and writes one CSV per curve plus a JSON run manifest.

mod experiments;
mod output;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use onebit_mimo::transceive::Processing;
use onebit_mimo::SystemConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    /// Monte Carlo and closed-form sum spectral efficiency vs operating power.
    Fig2,
    /// CDF of the per-antenna downlink transmit power.
    Fig3,
    /// EE/SE Pareto frontiers: optimized, benchmark, unquantized reference.
    Pareto,
    /// Optimal user loading K*/M vs array size.
    OptimalK,
    /// Optimal relative pilot length vs array size.
    OptimalTau0,
    /// Optimal operating power vs array size.
    OptimalRho,
    /// Uplink/downlink duality roundtrips under both noise models.
    DualityCheck,
    /// Cross-module statistical validation suite.
    Validation,
}

impl ExperimentName {
    fn label(&self) -> &'static str {
        match self {
            ExperimentName::Fig2 => "fig2",
            ExperimentName::Fig3 => "fig3",
            ExperimentName::Pareto => "pareto",
            ExperimentName::OptimalK => "optimal-k",
            ExperimentName::OptimalTau0 => "optimal-tau0",
            ExperimentName::OptimalRho => "optimal-rho",
            ExperimentName::DualityCheck => "duality-check",
            ExperimentName::Validation => "validation",
        }
    }
}

/// Simulation and optimization toolkit for one-bit massive MIMO systems.
#[derive(Debug, Parser)]
#[command(name = "onebit-mimo", version, about)]
pub struct Cli {
    /// Path to the JSON scenario configuration.
    #[arg(long)]
    config: PathBuf,

    /// Experiment to run.
    #[arg(long, value_enum)]
    experiment: ExperimentName,

    /// Master seed; overrides the `seed` field of the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo trials (or channel realizations) per point.
    #[arg(long)]
    trials: Option<usize>,

    /// Output directory for CSV files and the run manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Linear processing family.
    #[arg(long, default_value = "mrc")]
    processing: ProcessingArg,

    /// Override the antenna counts swept by the experiment, e.g. "32,64".
    #[arg(long, value_delimiter = ',')]
    antennas: Option<Vec<usize>>,

    /// Override the operating-power grid as "lo:hi:step" in dB.
    #[arg(long, allow_hyphen_values = true)]
    power_db: Option<String>,

    /// Number of weight pairs on the Pareto sweep.
    #[arg(long, default_value_t = 21)]
    weights: usize,

    /// Total transmit power in dB for the per-antenna power experiment.
    #[arg(long, default_value_t = 10.0)]
    total_power_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessingArg {
    Mrc,
    Zf,
}

impl From<ProcessingArg> for Processing {
    fn from(value: ProcessingArg) -> Self {
        match value {
            ProcessingArg::Mrc => Processing::Mrc,
            ProcessingArg::Zf => Processing::Zf,
        }
    }
}

/// Fully resolved experiment description handed to the runners.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub config: SystemConfig,
    pub processing: Processing,
    pub trials: usize,
    pub out_dir: PathBuf,
    pub antennas: Vec<usize>,
    pub power_db: Vec<f64>,
    pub weight_pairs: usize,
    pub total_power_db: f64,
}

fn parse_power_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("power grid must be lo:hi:step, got '{text}'");
    }
    let lo = f64::from_str(parts[0]).context("bad lo")?;
    let hi = f64::from_str(parts[1]).context("bad hi")?;
    let step = f64::from_str(parts[2]).context("bad step")?;
    if step <= 0.0 || hi < lo {
        bail!("power grid must satisfy lo <= hi, step > 0");
    }
    let n = ((hi - lo) / step).round() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let text = std::fs::read_to_string(&cli.config)
        .with_context(|| format!("reading {}", cli.config.display()))?;
    let mut config = SystemConfig::from_json(&text)
        .map_err(|e| anyhow::anyhow!("{e}"))
        .context("invalid configuration")?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }

    let default_antennas: Vec<usize> = match cli.experiment {
        ExperimentName::Fig2 => vec![32, 64],
        ExperimentName::Fig3 => vec![32, 64, 128],
        ExperimentName::Pareto => vec![200, 400, 500],
        ExperimentName::OptimalK | ExperimentName::OptimalTau0 | ExperimentName::OptimalRho => {
            (2..=10).map(|i| i * 50).collect()
        }
        _ => vec![config.antennas],
    };
    let default_trials = match cli.experiment {
        ExperimentName::Fig2 => 200,
        ExperimentName::Fig3 => 500,
        ExperimentName::DualityCheck => 100,
        _ => 200,
    };
    let default_power: Vec<f64> = match cli.experiment {
        ExperimentName::Fig2 => parse_power_grid("-20:0:2.5")?,
        _ => parse_power_grid("-30:10:0.5")?,
    };

    let spec = ExperimentSpec {
        name: cli.experiment,
        config,
        processing: cli.processing.into(),
        trials: cli.trials.unwrap_or(default_trials),
        out_dir: cli.out,
        antennas: cli.antennas.unwrap_or(default_antennas),
        power_db: match &cli.power_db {
            Some(text) => parse_power_grid(text)?,
            None => default_power,
        },
        weight_pairs: cli.weights.max(2),
        total_power_db: cli.total_power_db,
    };
    if spec.trials == 0 {
        bail!("at least one trial required");
    }

    let run = experiments::run(&spec)?;
    println!(
        "{}: wrote {} file(s) to {}",
        spec.name.label(),
        run.outputs.len(),
        spec.out_dir.display()
    );
    for path in &run.outputs {
        println!("  {}", path.display());
    }
    if !run.checks_passed {
        eprintln!("validation checks failed");
        std::process::exit(1);
    }
    Ok(())
}
