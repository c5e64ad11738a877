//! Spherical Hamiltonian Monte Carlo for constrained targets, with Wall HMC
//! and random-walk Metropolis baselines.
//!
//! A constrained domain (box, q-norm ball) is mapped onto the unit ball and
//! lifted to the upper hemisphere of `S^D`, where the sampler runs exact
//! great-circle dynamics. Draws are mapped back and carry importance weights
//! for the change of variables.

pub mod constraints;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod models;
pub mod samplers;

pub use constraints::{ConstraintConfig, ConstraintDomain, Shape};
pub use diagnostics::{efficiency_report, ess, weighted_moments, EssReport};
pub use error::{Error, Result};
pub use harness::{run_experiment, shrinkage_path, ExperimentConfig, ExperimentSpec};
pub use models::TargetModel;
pub use samplers::{run_chain, Chain, SamplerConfig, SamplerKind};
