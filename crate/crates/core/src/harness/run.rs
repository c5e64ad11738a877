use std::fs;
use std::path::PathBuf;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{DataSource, ExperimentSpec, SpikeSource, TargetSpec};
use super::output::{
    draws_file_name, report_file_name, write_draws, write_json, write_summary, CellStatus,
    Manifest, SummaryRow,
};
use crate::constraints::ConstraintDomain;
use crate::diagnostics::{efficiency_report, weighted_mean_standard_errors, weighted_moments};
use crate::error::{Error, Result};
use crate::models::{
    bridge_model, load_diabetes, synth_spikes, synthetic_diabetes, FgmCopulaModel, RegressionData,
    SpikeData, TargetModel, TruncatedGaussian, DIABETES_COLUMNS,
};
use crate::samplers::{run_chain, SamplerKind};

pub const RESOLVED_CONFIG_FILE: &str = "config.resolved.toml";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const PATH_FILE: &str = "path.csv";

/// A model paired with its constraint domain.
pub struct Problem {
    pub model: Box<dyn TargetModel>,
    pub domain: ConstraintDomain,
    /// Coupling used to simulate synthetic spike trains.
    pub truth: Option<DVector<f64>>,
    pub regression: Option<RegressionData>,
}

pub fn regression_data(source: &DataSource) -> Result<RegressionData> {
    match source {
        DataSource::File(path) => load_diabetes(path),
        DataSource::Synthetic { seed } => {
            let (x, y, _) = synthetic_diabetes(*seed);
            RegressionData::from_raw(&x, &y, &DIABETES_COLUMNS[..10])
        }
    }
}

/// Builds the model and domain; `shrinkage` overrides the configured factor
/// of a regression experiment.
pub fn build_problem(spec: &ExperimentSpec, shrinkage: Option<f64>) -> Result<Problem> {
    match &spec.target {
        TargetSpec::TruncatedGaussian {
            mean,
            covariance,
            constraint,
        } => Ok(Problem {
            model: Box::new(TruncatedGaussian::new(
                DVector::from_vec(mean.clone()),
                super::config::matrix_from_rows(covariance),
            )?),
            domain: constraint.build()?,
            truth: None,
            regression: None,
        }),
        TargetSpec::Regression {
            data,
            q,
            shrinkage: s,
            sigma2,
            ..
        } => {
            let data = regression_data(data)?;
            let sigma2 = sigma2.unwrap_or(data.residual_variance());
            let domain = data.shrinkage_domain(*q, shrinkage.unwrap_or(*s))?;
            Ok(Problem {
                model: Box::new(bridge_model(&data, sigma2, *q)?),
                domain,
                truth: None,
                regression: Some(data),
            })
        }
        TargetSpec::Copula { spikes } => {
            let (data, truth) = match spikes {
                SpikeSource::File(path) => (SpikeData::from_csv(path)?, None),
                SpikeSource::Synthetic {
                    n_bins,
                    firing_rates,
                    coupling,
                    seed,
                } => {
                    let coupling = DVector::from_vec(coupling.clone());
                    (
                        synth_spikes(firing_rates, *n_bins, &coupling, *seed)?,
                        Some(coupling),
                    )
                }
            };
            let model = FgmCopulaModel::new(&data)?;
            Ok(Problem {
                domain: model.domain(),
                model: Box::new(model),
                truth,
                regression: None,
            })
        }
    }
}

/// What one (sampler, seed) cell produced.
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub sampler: SamplerKind,
    pub seed: u64,
    pub result: std::result::Result<SummaryRow, String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub cells: Vec<CellOutcome>,
    pub complete: bool,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn rows(&self) -> impl Iterator<Item = &SummaryRow> {
        self.cells.iter().filter_map(|c| c.result.as_ref().ok())
    }
}

fn run_cell(
    spec: &ExperimentSpec,
    problem: &Problem,
    sampler: SamplerKind,
    seed: u64,
) -> Result<SummaryRow> {
    let cfg = spec.sampler_config(sampler, seed);
    let chain = run_chain(
        sampler,
        problem.model.as_ref(),
        &problem.domain,
        &cfg,
        spec.num_iter,
        spec.burn_in,
    )?;
    write_draws(
        &spec.out_dir.join(draws_file_name(sampler, seed)),
        &chain,
        &problem.domain,
    )?;
    let report = efficiency_report(&chain)?;
    write_json(&spec.out_dir.join(report_file_name(sampler, seed)), &report)?;
    let (mean, covariance) = weighted_moments(&chain.draws, &chain.weights)?;
    let std_error = weighted_mean_standard_errors(&chain.draws, &chain.weights)?;
    Ok(SummaryRow {
        sampler,
        seed,
        report,
        mean,
        std_error,
        covariance,
        bounces_per_iter: chain.bounces_per_iteration(),
        outside_rejections: chain.outside_rejections,
    })
}

fn write_resolved_config(spec: &ExperimentSpec) -> Result<()> {
    fs::write(
        spec.out_dir.join(RESOLVED_CONFIG_FILE),
        spec.to_config().to_toml()?,
    )?;
    Ok(())
}

/// Runs every (sampler, seed) cell and writes draws, reports, the summary
/// table, the resolved configuration, and the manifest into `spec.out_dir`.
///
/// Nothing is written if the problem cannot be built. A failing cell does not
/// stop the others; the manifest then records `complete = false`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunOutcome> {
    let problem = build_problem(spec, None)?;
    fs::create_dir_all(&spec.out_dir)?;
    write_resolved_config(spec)?;

    let cells: Vec<(SamplerKind, u64)> = spec
        .samplers
        .iter()
        .flat_map(|k| spec.seeds.iter().map(move |s| (*k, *s)))
        .collect();
    let run = |&(sampler, seed): &(SamplerKind, u64)| CellOutcome {
        sampler,
        seed,
        result: run_cell(spec, &problem, sampler, seed).map_err(|e| e.to_string()),
    };
    let outcomes: Vec<CellOutcome> = if spec.parallel {
        cells.par_iter().map(run).collect()
    } else {
        cells.iter().map(run).collect()
    };

    let rows: Vec<SummaryRow> = outcomes
        .iter()
        .filter_map(|c| c.result.clone().ok())
        .collect();
    write_summary(
        &spec.out_dir.join(SUMMARY_FILE),
        problem.domain.dim(),
        &rows,
    )?;
    let complete = outcomes.iter().all(|c| c.result.is_ok());
    let manifest = Manifest {
        complete,
        config: RESOLVED_CONFIG_FILE.into(),
        summary: Some(SUMMARY_FILE.into()),
        cells: outcomes
            .iter()
            .map(|c| CellStatus {
                sampler: c.sampler,
                seed: c.seed,
                ok: c.result.is_ok(),
                draws: c
                    .result
                    .is_ok()
                    .then(|| draws_file_name(c.sampler, c.seed).into()),
                report: c
                    .result
                    .is_ok()
                    .then(|| report_file_name(c.sampler, c.seed).into()),
                error: c.result.as_ref().err().cloned(),
            })
            .collect(),
    };
    write_json(&spec.out_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(RunOutcome {
        cells: outcomes,
        complete,
        out_dir: spec.out_dir.clone(),
    })
}

/// One point of a shrinkage path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathPoint {
    pub s: f64,
    pub coefficient: usize,
    pub estimate: f64,
}

/// Sweeps the shrinkage factor over the configured grid with the first
/// listed sampler and seed, recording the weighted posterior mean of every
/// coefficient. Writes `path.csv` (`s,coefficient,estimate`) to `spec.out_dir`.
pub fn shrinkage_path(spec: &ExperimentSpec) -> Result<Vec<PathPoint>> {
    let TargetSpec::Regression { s_grid, .. } = &spec.target else {
        return Err(Error::config(
            "kind",
            "shrinkage paths need a lasso or bridge experiment",
        ));
    };
    let sampler = spec.samplers[0];
    let cfg = spec.sampler_config(sampler, spec.seeds[0]);
    // Build once to fail early on bad data before any output is written.
    build_problem(spec, Some(s_grid[0]))?;

    let sweep = |&s: &f64| -> Result<Vec<PathPoint>> {
        let problem = build_problem(spec, Some(s))?;
        let chain = run_chain(
            sampler,
            problem.model.as_ref(),
            &problem.domain,
            &cfg,
            spec.num_iter,
            spec.burn_in,
        )?;
        let (mean, _) = weighted_moments(&chain.draws, &chain.weights)?;
        Ok(mean
            .iter()
            .enumerate()
            .map(|(coefficient, &estimate)| PathPoint {
                s,
                coefficient,
                estimate,
            })
            .collect())
    };
    let per_s: Vec<Vec<PathPoint>> = if spec.parallel {
        s_grid.par_iter().map(sweep).collect::<Result<_>>()?
    } else {
        s_grid.iter().map(sweep).collect::<Result<_>>()?
    };
    let points: Vec<PathPoint> = per_s.into_iter().flatten().collect();

    fs::create_dir_all(&spec.out_dir)?;
    write_resolved_config(spec)?;
    let mut w = csv::Writer::from_path(spec.out_dir.join(PATH_FILE))?;
    for p in &points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(points)
}
