//! Target densities, written as potentials `U(β) = −log p(β) + const` on the
//! original (constrained) coordinates. Constraints are not part of a model;
//! they are supplied separately as a [`ConstraintDomain`](crate::constraints::ConstraintDomain).

mod copula;
mod gaussian;
mod regression;

pub use copula::{
    fgm_pmf, pair_count, pair_index, synth_spikes, FgmCopulaModel, SpikeData, MAX_NEURONS,
};
pub use gaussian::{banded_covariance, TruncatedGaussian};
pub use regression::{
    bridge_model, lasso_model, load_diabetes, synthetic_diabetes, write_regression_csv,
    RegressionData, RegressionModel, DIABETES_COLUMNS,
};

use nalgebra::DVector;

pub trait TargetModel: Send + Sync {
    fn dim(&self) -> usize;

    /// `U(β)`. May return `+∞` where the density is zero.
    fn potential(&self, beta: &DVector<f64>) -> f64;

    fn gradient(&self, beta: &DVector<f64>) -> DVector<f64>;

    fn potential_and_gradient(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        (self.potential(beta), self.gradient(beta))
    }

    fn description(&self) -> String;
}
