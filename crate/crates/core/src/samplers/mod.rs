//! MCMC drivers: Spherical HMC, Wall HMC, and random-walk Metropolis.
//!
//! Every sampler advances a [`ChainState`] one Metropolis step at a time and
//! reports what happened in a [`StepInfo`]. [`run_chain`] wraps a step
//! function into a full chain with burn-in, timing, and draw recording.

mod rwm;
mod spherical;
mod wall;

pub use rwm::rwm_step;
pub use spherical::{spherical_hmc_step, spherical_leapfrog, SphericalTrajectory};
pub use wall::{reflect_in_domain, wall_hmc_step, MAX_REFLECTIONS};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{ConstraintDomain, DOMAIN_TOL};
use crate::error::{Error, Result};
use crate::geometry::{sphere_to_ball, SpherePoint};
use crate::models::TargetModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SamplerKind {
    #[serde(rename = "sph")]
    Spherical,
    #[serde(rename = "wall")]
    Wall,
    #[serde(rename = "rwm")]
    RandomWalk,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [
        SamplerKind::Spherical,
        SamplerKind::Wall,
        SamplerKind::RandomWalk,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            SamplerKind::Spherical => "sph",
            SamplerKind::Wall => "wall",
            SamplerKind::RandomWalk => "rwm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            SamplerKind::Spherical => "Spherical HMC",
            SamplerKind::Wall => "Wall HMC",
            SamplerKind::RandomWalk => "RWM",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sph" => Ok(SamplerKind::Spherical),
            "wall" => Ok(SamplerKind::Wall),
            "rwm" => Ok(SamplerKind::RandomWalk),
            other => Err(Error::config(
                "sampler",
                format!("unknown sampler `{other}` (expected sph, wall, or rwm)"),
            )),
        }
    }
}

/// Tuning for one chain. HMC samplers use `step_size`/`num_leapfrog`
/// (or `trajectory_length`); random-walk Metropolis uses `proposal_scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub step_size: f64,
    pub num_leapfrog: usize,
    /// When set, overrides `step_size` with `trajectory_length / num_leapfrog`.
    pub trajectory_length: Option<f64>,
    /// Draw the number of leapfrog steps uniformly from `1..=num_leapfrog` each iteration.
    pub randomize_steps: bool,
    pub proposal_scale: f64,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            step_size: 0.1,
            num_leapfrog: 10,
            trajectory_length: None,
            randomize_steps: true,
            proposal_scale: 0.1,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn step_size(&self) -> f64 {
        match self.trajectory_length {
            Some(t) => t / self.num_leapfrog as f64,
            None => self.step_size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_leapfrog == 0 {
            return Err(Error::config("num_leapfrog", "must be at least 1"));
        }
        if !(self.step_size() > 0.0 && self.step_size().is_finite()) {
            return Err(Error::config("step_size", "must be positive and finite"));
        }
        if !(self.proposal_scale > 0.0 && self.proposal_scale.is_finite()) {
            return Err(Error::config(
                "proposal_scale",
                "must be positive and finite",
            ));
        }
        Ok(())
    }

    pub(crate) fn draw_steps<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.randomize_steps {
            rng.random_range(1..=self.num_leapfrog)
        } else {
            self.num_leapfrog
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatePoint {
    /// Spherical HMC lives on the sphere.
    Sphere(SpherePoint),
    /// Wall HMC and random-walk Metropolis work in the original coordinates.
    Original(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub point: StatePoint,
    /// `U` at the current point (always finite).
    pub potential: f64,
    /// Importance weight `|dT|`; 1 for samplers that work in the original space.
    pub weight: f64,
}

impl ChainState {
    /// Starts at the pole `θ̃ = (0, …, 0, 1)`.
    pub fn at_pole(model: &dyn TargetModel, domain: &ConstraintDomain) -> Result<Self> {
        let point = SpherePoint::pole(domain.dim());
        let beta = domain.from_ball(&sphere_to_ball(&point));
        let potential = finite_start(model.potential(&beta))?;
        Ok(ChainState {
            weight: domain.jacobian_weight(&point),
            point: StatePoint::Sphere(point),
            potential,
        })
    }

    /// Starts at `beta`, which must lie inside `domain`.
    pub fn at_point(
        model: &dyn TargetModel,
        domain: &ConstraintDomain,
        beta: DVector<f64>,
    ) -> Result<Self> {
        if !domain.contains(&beta, 0.0) {
            return Err(Error::OutsideDomain(domain.describe()));
        }
        let potential = finite_start(model.potential(&beta))?;
        Ok(ChainState {
            point: StatePoint::Original(beta),
            potential,
            weight: 1.0,
        })
    }

    /// The current point in original coordinates.
    pub fn original(&self, domain: &ConstraintDomain) -> DVector<f64> {
        match &self.point {
            StatePoint::Sphere(x) => domain.from_ball(&sphere_to_ball(x)),
            StatePoint::Original(beta) => beta.clone(),
        }
    }
}

fn finite_start(u: f64) -> Result<f64> {
    if u.is_finite() {
        Ok(u)
    } else {
        Err(Error::ModelEvaluation {
            iteration: 0,
            reason: format!("potential at the initial point is {u}"),
        })
    }
}

/// What a single Metropolis step did.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepInfo {
    pub accepted: bool,
    /// `H(proposal) − H(current)`; `+∞` when the proposal was invalid.
    pub delta_h: f64,
    /// Wall reflections during the trajectory (Wall HMC only).
    pub bounces: usize,
    /// The proposal fell outside the domain (random-walk Metropolis only).
    pub outside_domain: bool,
}

pub(crate) fn metropolis<R: Rng + ?Sized>(delta_h: f64, rng: &mut R) -> bool {
    if !delta_h.is_finite() {
        return false;
    }
    delta_h <= 0.0 || rng.random::<f64>() < (-delta_h).exp()
}

/// Retained draws of one chain, in original coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub sampler: SamplerKind,
    pub draws: Vec<DVector<f64>>,
    pub weights: Vec<f64>,
    pub accepts: Vec<bool>,
    /// Total wall reflections over retained iterations.
    pub wall_bounces: usize,
    /// Retained iterations whose proposal left the domain.
    pub outside_rejections: usize,
    /// `|ΔH|` per retained iteration (zero for random-walk Metropolis).
    pub abs_delta_h: Vec<f64>,
    /// Sampling time over all iterations, burn-in included.
    pub elapsed_seconds: f64,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.draws.first().map_or(0, |d| d.len())
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accepts.is_empty() {
            return 0.0;
        }
        self.accepts.iter().filter(|a| **a).count() as f64 / self.accepts.len() as f64
    }

    pub fn bounces_per_iteration(&self) -> f64 {
        self.wall_bounces as f64 / self.len().max(1) as f64
    }

    /// The trace of coordinate `j`.
    pub fn coordinate(&self, j: usize) -> Vec<f64> {
        self.draws.iter().map(|d| d[j]).collect()
    }
}

/// Runs `num_iter` iterations, discarding the first `burn_in`.
pub fn run_chain(
    sampler: SamplerKind,
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    cfg: &SamplerConfig,
    num_iter: usize,
    burn_in: usize,
) -> Result<Chain> {
    cfg.validate()?;
    if num_iter <= burn_in {
        return Err(Error::config(
            "num_iter",
            format!("must exceed burn_in ({num_iter} <= {burn_in})"),
        ));
    }
    if model.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: model.dim(),
        });
    }
    if sampler == SamplerKind::Wall {
        wall::check_supported(domain)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = match sampler {
        SamplerKind::Spherical => ChainState::at_pole(model, domain)?,
        _ => ChainState::at_point(model, domain, domain.center())?,
    };

    let retained = num_iter - burn_in;
    let mut chain = Chain {
        sampler,
        draws: Vec::with_capacity(retained),
        weights: Vec::with_capacity(retained),
        accepts: Vec::with_capacity(retained),
        wall_bounces: 0,
        outside_rejections: 0,
        abs_delta_h: Vec::with_capacity(retained),
        elapsed_seconds: 0.0,
    };

    let start = Instant::now();
    for iter in 0..num_iter {
        let (next, info) = match sampler {
            SamplerKind::Spherical => spherical_hmc_step(&state, model, domain, cfg, &mut rng)?,
            SamplerKind::Wall => wall_hmc_step(&state, model, domain, cfg, &mut rng)?,
            SamplerKind::RandomWalk => rwm_step(&state, model, domain, cfg, &mut rng)?,
        };
        state = next;
        if !state.potential.is_finite() {
            return Err(Error::ModelEvaluation {
                iteration: iter,
                reason: format!("potential became {}", state.potential),
            });
        }
        if iter >= burn_in {
            let beta = state.original(domain);
            debug_assert!(domain.contains(&beta, DOMAIN_TOL));
            chain.draws.push(beta);
            chain.weights.push(state.weight);
            chain.accepts.push(info.accepted);
            chain.wall_bounces += info.bounces;
            chain.outside_rejections += usize::from(info.outside_domain);
            chain.abs_delta_h.push(if info.delta_h.is_finite() {
                info.delta_h.abs()
            } else {
                f64::INFINITY
            });
        }
    }
    chain.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(chain)
}
