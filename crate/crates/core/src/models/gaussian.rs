use nalgebra::{DMatrix, DVector};

use super::TargetModel;
use crate::error::{Error, Result};

/// A Gaussian potential `½(β−μ)ᵀΣ⁻¹(β−μ)`. Truncation comes from the domain.
#[derive(Debug, Clone)]
pub struct TruncatedGaussian {
    mean: DVector<f64>,
    precision: DMatrix<f64>,
    /// `Σ⁻¹μ`, so the gradient is one matrix-vector product.
    shift: DVector<f64>,
}

impl TruncatedGaussian {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: covariance.nrows(),
            });
        }
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-12 * covariance.amax().max(1.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let chol = covariance.cholesky().ok_or(Error::NotPositiveDefinite)?;
        let precision = chol.inverse();
        Ok(TruncatedGaussian {
            shift: &precision * &mean,
            mean,
            precision,
        })
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }
}

/// `Σᵢⱼ = 1/(1 + |i − j|)`.
pub fn banded_covariance(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| 1.0 / (1.0 + i.abs_diff(j) as f64))
}

impl TargetModel for TruncatedGaussian {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn potential(&self, beta: &DVector<f64>) -> f64 {
        let r = beta - &self.mean;
        0.5 * r.dot(&(&self.precision * &r))
    }

    fn gradient(&self, beta: &DVector<f64>) -> DVector<f64> {
        self.potential_and_gradient(beta).1
    }

    fn potential_and_gradient(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let mut g = self.shift.clone();
        g.gemv(1.0, &self.precision, beta, -1.0);
        (0.5 * (beta.dot(&g) - self.mean.dot(&g)), g)
    }

    fn description(&self) -> String {
        format!("gaussian potential in R^{}", self.mean.len())
    }
}
