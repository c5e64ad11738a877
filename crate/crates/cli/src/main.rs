//! `sphmc`: run constrained-sampling experiments and inspect their output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use sphmc_core::harness::{read_draws, run_experiment, shrinkage_path, PATH_FILE};
use sphmc_core::{EssReport, ExperimentConfig, SamplerKind};

#[derive(Debug, Parser)]
#[command(
    name = "sphmc",
    version,
    about = "Spherical HMC for constrained targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every (sampler, seed) cell of an experiment and write draws,
    /// reports, a summary table and a manifest.
    Sample {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run this seed only.
        #[arg(long)]
        seed: Option<u64>,
        /// Run this sampler only.
        #[arg(long, value_parser = parse_sampler)]
        sampler: Option<SamplerKind>,
    },
    /// Sweep the shrinkage factor of a lasso or bridge experiment and write `path.csv`.
    Path {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the effective-sample-size report of a draws CSV as JSON.
    Ess {
        #[arg(long)]
        draws: PathBuf,
    },
}

fn parse_sampler(s: &str) -> std::result::Result<SamplerKind, String> {
    s.parse().map_err(|e: sphmc_core::Error| e.to_string())
}

fn load(path: &Path, out: Option<PathBuf>) -> Result<(ExperimentConfig, Option<PathBuf>)> {
    let (mut config, base) = ExperimentConfig::read_file(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    if out.is_some() {
        config.out_dir = out;
    }
    Ok((config, base))
}

fn sample(
    config: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    sampler: Option<SamplerKind>,
) -> Result<bool> {
    let (mut config, base) = load(config, out)?;
    if let Some(s) = seed {
        config.seeds = Some(vec![s]);
    }
    if let Some(k) = sampler {
        config.samplers = Some(vec![k]);
    }
    let spec = config.resolve(base.as_deref())?;
    let outcome = run_experiment(&spec)?;
    println!(
        "{:<7} {:>6} {:>8} {:>10} {:>10} {:>14}",
        "sampler", "seed", "accept", "ess_min", "ess_med", "min_ess/s"
    );
    for cell in &outcome.cells {
        match &cell.result {
            Ok(row) => println!(
                "{:<7} {:>6} {:>8.3} {:>10.1} {:>10.1} {:>14.1}",
                cell.sampler.short_name(),
                cell.seed,
                row.report.accept_rate,
                row.report.ess_min,
                row.report.ess_med,
                row.report.min_ess_per_sec.unwrap_or(f64::NAN)
            ),
            Err(e) => eprintln!(
                "{} seed {} failed: {e}",
                cell.sampler.short_name(),
                cell.seed
            ),
        }
    }
    println!("results in {}", outcome.out_dir.display());
    if !outcome.complete {
        eprintln!("run incomplete: see manifest.json");
    }
    Ok(outcome.complete)
}

fn path(config: &Path, out: Option<PathBuf>) -> Result<()> {
    let (config, base) = load(config, out)?;
    let spec = config.resolve(base.as_deref())?;
    let points = shrinkage_path(&spec)?;
    println!(
        "{} path points written to {}",
        points.len(),
        spec.out_dir.join(PATH_FILE).display()
    );
    Ok(())
}

fn ess(draws: &Path) -> Result<()> {
    let table = read_draws(draws)?;
    // A draws file carries no timing, so min_ess_per_sec is null.
    let report = EssReport::from_columns(&table.columns, table.acceptance_rate(), 0.0)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample {
            config,
            out,
            seed,
            sampler,
        } => sample(&config, out, seed, sampler),
        Command::Path { config, out } => path(&config, out).map(|()| true),
        Command::Ess { draws } => ess(&draws).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
