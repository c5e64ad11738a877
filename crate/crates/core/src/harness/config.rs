//! Experiment configuration: a TOML file deserialized into [`ExperimentConfig`]
//! (every key optional except `kind`), then resolved into a fully specified
//! [`ExperimentSpec`] with defaults applied.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constraints::{ConstraintConfig, ConstraintDomain, Shape};
use crate::error::{Error, Result};
use crate::models::{pair_count, MAX_NEURONS};
use crate::samplers::{SamplerConfig, SamplerKind};

pub const DEFAULT_NUM_ITER: usize = 11_000;
pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_BRIDGE_Q: f64 = 1.2;
pub const DEFAULT_SHRINKAGE: f64 = 0.5;
pub const DEFAULT_FIRING_RATES: [f64; 5] = [0.2, 0.3, 0.25, 0.15, 0.35];
/// Pair couplings in lexicographic order (1,2), (1,3), …, (4,5); `Σ|β| = 0.9`.
pub const DEFAULT_COUPLING: [f64; 10] = [0.3, -0.2, 0.1, 0.0, 0.0, 0.15, 0.0, -0.1, 0.0, 0.05];
pub const DEFAULT_N_BINS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    TruncatedGaussian,
    Lasso,
    Bridge,
    Copula,
}

impl ExperimentKind {
    pub fn is_regression(self) -> bool {
        matches!(self, ExperimentKind::Lasso | ExperimentKind::Bridge)
    }
}

/// Per-sampler tuning keys, as written in `[sph]`, `[wall]`, and `[rwm]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_leapfrog: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub randomize_steps: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proposal_scale: Option<f64>,
}

/// The configuration file as written by a user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,

    // truncated-gaussian
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintConfig>,

    // lasso / bridge
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrinkage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,

    // copula
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spikes: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub firing_rates: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Vec<f64>>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub samplers: Option<Vec<SamplerKind>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<bool>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sph: Option<SamplerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall: Option<SamplerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rwm: Option<SamplerSection>,
}

impl ExperimentConfig {
    pub fn minimal(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            dim: None,
            mean: None,
            covariance: None,
            constraint: None,
            data: None,
            synthetic_seed: None,
            q: None,
            shrinkage: None,
            s_grid: None,
            sigma2: None,
            spikes: None,
            n_bins: None,
            firing_rates: None,
            coupling: None,
            samplers: None,
            num_iter: None,
            burn_in: None,
            seeds: None,
            out_dir: None,
            parallel: None,
            sph: None,
            wall: None,
            rwm: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Parses a config file. Also returns its directory, against which
    /// relative data paths resolve.
    pub fn read_file(path: impl AsRef<Path>) -> Result<(Self, Option<PathBuf>)> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        let base = path.canonicalize()?.parent().map(Path::to_path_buf);
        Ok((ExperimentConfig::from_toml(&text)?, base))
    }
}

/// Where regression data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    Synthetic { seed: u64 },
}

/// Where spike trains come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SpikeSource {
    File(PathBuf),
    Synthetic {
        n_bins: usize,
        firing_rates: Vec<f64>,
        coupling: Vec<f64>,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    TruncatedGaussian {
        mean: Vec<f64>,
        covariance: Vec<Vec<f64>>,
        constraint: ConstraintConfig,
    },
    Regression {
        data: DataSource,
        q: f64,
        shrinkage: f64,
        s_grid: Vec<f64>,
        /// `None` uses the OLS residual variance of the data.
        sigma2: Option<f64>,
    },
    Copula {
        spikes: SpikeSource,
    },
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub dim: usize,
    pub target: TargetSpec,
    pub samplers: Vec<SamplerKind>,
    /// Tuning per sampler; the seed field is replaced per cell.
    pub tuning: BTreeMap<SamplerKind, SamplerConfig>,
    pub num_iter: usize,
    pub burn_in: usize,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

/// Default upper bounds of the truncated Gaussian box: 5 on the first
/// coordinate, then 1 in two dimensions and 0.5 otherwise.
fn default_rectangle(dim: usize) -> ConstraintConfig {
    let rest = if dim == 2 { 1.0 } else { 0.5 };
    ConstraintConfig::Rectangle {
        lower: vec![0.0; dim],
        upper: (0..dim).map(|i| if i == 0 { 5.0 } else { rest }).collect(),
    }
}

/// Step size used by every sampler on regression posteriors, whose spread is
/// a small fraction of the constraint radius.
const REGRESSION_STEP: f64 = 0.005;
/// Baseline steps for the copula, whose likelihood is sharp relative to the diamond.
const COPULA_WALL_STEP: f64 = 0.04;
const COPULA_RWM_SCALE: f64 = 0.01;

fn default_tuning(experiment: ExperimentKind, kind: SamplerKind, dim: usize) -> SamplerConfig {
    let base = SamplerConfig::default();
    let regression = experiment.is_regression();
    let copula = experiment == ExperimentKind::Copula;
    match kind {
        SamplerKind::Spherical if regression => SamplerConfig {
            step_size: REGRESSION_STEP,
            num_leapfrog: 20,
            ..base
        },
        SamplerKind::Spherical => SamplerConfig {
            trajectory_length: Some(2.0 * PI / dim as f64),
            num_leapfrog: 10,
            ..base
        },
        SamplerKind::Wall => SamplerConfig {
            step_size: if regression {
                REGRESSION_STEP
            } else if copula {
                COPULA_WALL_STEP
            } else {
                0.1
            },
            num_leapfrog: 10,
            ..base
        },
        SamplerKind::RandomWalk => SamplerConfig {
            proposal_scale: if regression {
                REGRESSION_STEP
            } else if copula {
                COPULA_RWM_SCALE
            } else {
                0.5 / (dim as f64).sqrt()
            },
            ..base
        },
    }
}

fn apply_section(mut cfg: SamplerConfig, section: Option<&SamplerSection>) -> SamplerConfig {
    let Some(s) = section else { return cfg };
    if let Some(eps) = s.step_size {
        cfg.step_size = eps;
        // An explicit step size wins over the default trajectory length.
        if s.trajectory_length.is_none() {
            cfg.trajectory_length = None;
        }
    }
    if let Some(l) = s.num_leapfrog {
        cfg.num_leapfrog = l;
    }
    if let Some(t) = s.trajectory_length {
        cfg.trajectory_length = Some(t);
    }
    if let Some(r) = s.randomize_steps {
        cfg.randomize_steps = r;
    }
    if let Some(p) = s.proposal_scale {
        cfg.proposal_scale = p;
    }
    cfg
}

fn resolve_path(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

fn require(ok: bool, field: &str, reason: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, reason))
    }
}

fn forbid<T>(value: &Option<T>, field: &str, kind: ExperimentKind) -> Result<()> {
    require(
        value.is_none(),
        field,
        format!("not used by {kind:?} experiments"),
    )
}

impl ExperimentConfig {
    /// Applies defaults and validates. Relative paths are resolved against `base_dir`.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<ExperimentSpec> {
        let kind = self.kind;
        let (target, dim) = match kind {
            ExperimentKind::TruncatedGaussian => self.resolve_gaussian()?,
            ExperimentKind::Lasso | ExperimentKind::Bridge => self.resolve_regression(base_dir)?,
            ExperimentKind::Copula => self.resolve_copula(base_dir)?,
        };
        if let Some(d) = self.dim {
            require(
                d == dim,
                "dim",
                format!("{d} does not match the target dimension {dim}"),
            )?;
        }

        let samplers = match &self.samplers {
            Some(list) => list.clone(),
            None => SamplerKind::ALL
                .into_iter()
                .filter(|k| *k != SamplerKind::Wall || wall_supported(&target))
                .collect(),
        };
        require(
            !samplers.is_empty(),
            "samplers",
            "at least one sampler is required",
        )?;
        for (i, k) in samplers.iter().enumerate() {
            require(
                !samplers[..i].contains(k),
                "samplers",
                format!("`{k}` listed twice"),
            )?;
        }
        if samplers.contains(&SamplerKind::Wall) {
            require(
                wall_supported(&target),
                "samplers",
                "wall HMC supports rectangles and q = 1 balls only",
            )?;
        }

        let num_iter = self.num_iter.unwrap_or(DEFAULT_NUM_ITER);
        let burn_in = self.burn_in.unwrap_or(DEFAULT_BURN_IN);
        require(
            burn_in < num_iter,
            "burn_in",
            format!("must be smaller than num_iter ({burn_in} >= {num_iter})"),
        )?;
        let seeds = self.seeds.clone().unwrap_or_else(|| vec![0]);
        require(!seeds.is_empty(), "seeds", "at least one seed is required")?;

        let mut tuning = BTreeMap::new();
        for k in SamplerKind::ALL {
            let section = match k {
                SamplerKind::Spherical => self.sph.as_ref(),
                SamplerKind::Wall => self.wall.as_ref(),
                SamplerKind::RandomWalk => self.rwm.as_ref(),
            };
            let cfg = apply_section(default_tuning(kind, k, dim), section);
            cfg.validate().map_err(|e| match e {
                Error::InvalidConfig { field, reason } => {
                    Error::config(format!("{}.{field}", k.short_name()), reason)
                }
                other => other,
            })?;
            tuning.insert(k, cfg);
        }

        Ok(ExperimentSpec {
            kind,
            dim,
            target,
            samplers,
            tuning,
            num_iter,
            burn_in,
            seeds,
            out_dir: self
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("results")),
            parallel: self.parallel.unwrap_or(false),
        })
    }

    fn resolve_gaussian(&self) -> Result<(TargetSpec, usize)> {
        let kind = self.kind;
        for (value, field) in [
            (self.data.is_some(), "data"),
            (self.spikes.is_some(), "spikes"),
            (self.q.is_some(), "q"),
        ] {
            require(!value, field, format!("not used by {kind:?} experiments"))?;
        }
        forbid(&self.shrinkage, "shrinkage", kind)?;
        forbid(&self.s_grid, "s_grid", kind)?;
        forbid(&self.coupling, "coupling", kind)?;
        forbid(&self.firing_rates, "firing_rates", kind)?;

        let dim = self
            .dim
            .or(self.mean.as_ref().map(Vec::len))
            .or(self.covariance.as_ref().map(Vec::len))
            .or(self.constraint.as_ref().map(|c| match c {
                ConstraintConfig::UnitBall { dim } | ConstraintConfig::QNorm { dim, .. } => *dim,
                ConstraintConfig::Rectangle { lower, .. } => lower.len(),
            }))
            .ok_or_else(|| Error::config("dim", "required for truncated-gaussian experiments"))?;
        require(dim >= 1, "dim", "must be at least 1")?;
        let mean = self.mean.clone().unwrap_or_else(|| vec![0.0; dim]);
        require(
            mean.len() == dim,
            "mean",
            format!("has {} entries, expected {dim}", mean.len()),
        )?;
        let covariance = match &self.covariance {
            Some(rows) => rows.clone(),
            None => {
                let banded = crate::models::banded_covariance(dim);
                (0..dim)
                    .map(|i| banded.row(i).iter().copied().collect())
                    .collect()
            }
        };
        require(
            covariance.len() == dim && covariance.iter().all(|r| r.len() == dim),
            "covariance",
            format!("must be a {dim}x{dim} matrix"),
        )?;
        crate::models::TruncatedGaussian::new(
            DVector::from_vec(mean.clone()),
            matrix_from_rows(&covariance),
        )
        .map_err(|e| Error::config("covariance", e.to_string()))?;
        let constraint = self
            .constraint
            .clone()
            .unwrap_or_else(|| default_rectangle(dim));
        let domain = constraint
            .build()
            .map_err(|e| Error::config("constraint", e.to_string()))?;
        require(
            domain.dim() == dim,
            "constraint",
            format!("has dimension {}, expected {dim}", domain.dim()),
        )?;
        Ok((
            TargetSpec::TruncatedGaussian {
                mean,
                covariance,
                constraint,
            },
            dim,
        ))
    }

    fn resolve_regression(&self, base_dir: Option<&Path>) -> Result<(TargetSpec, usize)> {
        let kind = self.kind;
        forbid(&self.mean, "mean", kind)?;
        forbid(&self.covariance, "covariance", kind)?;
        forbid(&self.constraint, "constraint", kind)?;
        forbid(&self.spikes, "spikes", kind)?;
        forbid(&self.coupling, "coupling", kind)?;
        forbid(&self.firing_rates, "firing_rates", kind)?;
        forbid(&self.n_bins, "n_bins", kind)?;
        require(
            !(self.data.is_some() && self.synthetic_seed.is_some()),
            "synthetic_seed",
            "cannot be combined with `data`",
        )?;

        let q = match kind {
            ExperimentKind::Lasso => {
                require(
                    self.q.is_none_or(|q| q == 1.0),
                    "q",
                    "lasso experiments fix q = 1",
                )?;
                1.0
            }
            _ => self.q.unwrap_or(DEFAULT_BRIDGE_Q),
        };
        require(q > 0.0 && q.is_finite(), "q", "must be positive and finite")?;
        let shrinkage = self.shrinkage.unwrap_or(DEFAULT_SHRINKAGE);
        require(
            shrinkage > 0.0 && shrinkage <= 1.0,
            "shrinkage",
            "must lie in (0, 1]",
        )?;
        let s_grid = self
            .s_grid
            .clone()
            .unwrap_or_else(|| (1..=10).map(|i| i as f64 / 10.0).collect());
        require(!s_grid.is_empty(), "s_grid", "must not be empty")?;
        require(
            s_grid.iter().all(|s| *s > 0.0 && *s <= 1.0),
            "s_grid",
            "values must lie in (0, 1]",
        )?;
        if let Some(s2) = self.sigma2 {
            require(
                s2 > 0.0 && s2.is_finite(),
                "sigma2",
                "must be positive and finite",
            )?;
        }
        let data = match &self.data {
            Some(p) => DataSource::File(resolve_path(base_dir, p)),
            None => DataSource::Synthetic {
                seed: self.synthetic_seed.unwrap_or(0),
            },
        };
        Ok((
            TargetSpec::Regression {
                data,
                q,
                shrinkage,
                s_grid,
                sigma2: self.sigma2,
            },
            10,
        ))
    }

    fn resolve_copula(&self, base_dir: Option<&Path>) -> Result<(TargetSpec, usize)> {
        let kind = self.kind;
        forbid(&self.mean, "mean", kind)?;
        forbid(&self.covariance, "covariance", kind)?;
        forbid(&self.constraint, "constraint", kind)?;
        forbid(&self.data, "data", kind)?;
        forbid(&self.q, "q", kind)?;
        forbid(&self.shrinkage, "shrinkage", kind)?;
        forbid(&self.s_grid, "s_grid", kind)?;
        forbid(&self.sigma2, "sigma2", kind)?;

        if let Some(path) = &self.spikes {
            for (set, field) in [
                (self.n_bins.is_some(), "n_bins"),
                (self.firing_rates.is_some(), "firing_rates"),
                (self.coupling.is_some(), "coupling"),
                (self.synthetic_seed.is_some(), "synthetic_seed"),
            ] {
                require(
                    !set,
                    field,
                    "only used for synthetic spike trains (no `spikes` file)",
                )?;
            }
            let path = resolve_path(base_dir, path);
            // The dimension depends on the number of neurons in the file.
            let data = crate::models::SpikeData::from_csv(&path)?;
            let dim = pair_count(data.n_neurons());
            return Ok((
                TargetSpec::Copula {
                    spikes: SpikeSource::File(path),
                },
                dim,
            ));
        }

        let firing_rates = self
            .firing_rates
            .clone()
            .unwrap_or_else(|| DEFAULT_FIRING_RATES.to_vec());
        let n = firing_rates.len();
        require(
            (2..=MAX_NEURONS).contains(&n),
            "firing_rates",
            format!("needs 2 to {MAX_NEURONS} neurons, got {n}"),
        )?;
        require(
            firing_rates.iter().all(|f| *f > 0.0 && *f < 1.0),
            "firing_rates",
            "must lie strictly between 0 and 1",
        )?;
        let coupling = match &self.coupling {
            Some(c) => c.clone(),
            None if n == DEFAULT_FIRING_RATES.len() => DEFAULT_COUPLING.to_vec(),
            None => vec![0.0; pair_count(n)],
        };
        require(
            coupling.len() == pair_count(n),
            "coupling",
            format!(
                "needs {} pair entries for {n} neurons, got {}",
                pair_count(n),
                coupling.len()
            ),
        )?;
        require(
            coupling.iter().map(|c| c.abs()).sum::<f64>() <= 1.0,
            "coupling",
            "must satisfy Σ|β| ≤ 1",
        )?;
        let n_bins = self.n_bins.unwrap_or(DEFAULT_N_BINS);
        require(n_bins >= 1, "n_bins", "must be at least 1")?;
        let spikes = SpikeSource::Synthetic {
            n_bins,
            firing_rates,
            coupling,
            seed: self.synthetic_seed.unwrap_or(0),
        };
        Ok((TargetSpec::Copula { spikes }, pair_count(n)))
    }
}

fn wall_supported(target: &TargetSpec) -> bool {
    match target {
        TargetSpec::TruncatedGaussian { constraint, .. } => match constraint.build() {
            Ok(d) => {
                matches!(d.shape(), Shape::HyperRectangle { .. })
                    || matches!(d.shape(), Shape::QNormBall { q, .. } if *q == 1.0)
            }
            Err(_) => false,
        },
        TargetSpec::Regression { q, .. } => *q == 1.0,
        TargetSpec::Copula { .. } => true,
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn section_of(cfg: &SamplerConfig) -> SamplerSection {
    SamplerSection {
        step_size: Some(cfg.step_size),
        num_leapfrog: Some(cfg.num_leapfrog),
        trajectory_length: cfg.trajectory_length,
        randomize_steps: Some(cfg.randomize_steps),
        proposal_scale: Some(cfg.proposal_scale),
    }
}

impl ExperimentSpec {
    /// Reads and resolves a configuration file. Data paths inside it are taken
    /// relative to the file's directory; `out_dir` is relative to the working directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let (config, base) = ExperimentConfig::read_file(path)?;
        config.resolve(base.as_deref())
    }

    /// A configuration that resolves back to this spec.
    pub fn to_config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::minimal(self.kind);
        c.dim = Some(self.dim);
        match &self.target {
            TargetSpec::TruncatedGaussian {
                mean,
                covariance,
                constraint,
            } => {
                c.mean = Some(mean.clone());
                c.covariance = Some(covariance.clone());
                c.constraint = Some(constraint.clone());
            }
            TargetSpec::Regression {
                data,
                q,
                shrinkage,
                s_grid,
                sigma2,
            } => {
                match data {
                    DataSource::File(p) => c.data = Some(p.clone()),
                    DataSource::Synthetic { seed } => c.synthetic_seed = Some(*seed),
                }
                c.q = Some(*q);
                c.shrinkage = Some(*shrinkage);
                c.s_grid = Some(s_grid.clone());
                c.sigma2 = *sigma2;
            }
            TargetSpec::Copula { spikes } => match spikes {
                SpikeSource::File(p) => c.spikes = Some(p.clone()),
                SpikeSource::Synthetic {
                    n_bins,
                    firing_rates,
                    coupling,
                    seed,
                } => {
                    c.n_bins = Some(*n_bins);
                    c.firing_rates = Some(firing_rates.clone());
                    c.coupling = Some(coupling.clone());
                    c.synthetic_seed = Some(*seed);
                }
            },
        }
        c.samplers = Some(self.samplers.clone());
        c.num_iter = Some(self.num_iter);
        c.burn_in = Some(self.burn_in);
        c.seeds = Some(self.seeds.clone());
        c.out_dir = Some(self.out_dir.clone());
        c.parallel = Some(self.parallel);
        c.sph = Some(section_of(&self.tuning[&SamplerKind::Spherical]));
        c.wall = Some(section_of(&self.tuning[&SamplerKind::Wall]));
        c.rwm = Some(section_of(&self.tuning[&SamplerKind::RandomWalk]));
        c
    }

    /// Tuning for one (sampler, seed) cell.
    pub fn sampler_config(&self, sampler: SamplerKind, seed: u64) -> SamplerConfig {
        SamplerConfig {
            seed,
            ..self.tuning[&sampler].clone()
        }
    }

    /// The domain of a truncated Gaussian experiment; regression and copula
    /// domains depend on the data and come from [`build_problem`](super::build_problem).
    pub fn fixed_domain(&self) -> Option<Result<ConstraintDomain>> {
        match &self.target {
            TargetSpec::TruncatedGaussian { constraint, .. } => Some(constraint.build()),
            _ => None,
        }
    }
}
