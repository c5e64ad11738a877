//! Gaussian linear regression with a `N(0, σ²I)` coefficient prior. Lasso and
//! bridge variants share this potential; they differ only in the q-norm
//! constraint placed on the coefficients.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::TargetModel;
use crate::constraints::ConstraintDomain;
use crate::error::{Error, Result};

/// Column order of the diabetes CSV; the last column is the response.
pub const DIABETES_COLUMNS: [&str; 11] = [
    "age", "sex", "bmi", "map", "tc", "ldl", "hdl", "tch", "ltg", "glu", "y",
];

/// Standardized design (column means 0, column norms √n) and centered response.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    x: DMatrix<f64>,
    y: DVector<f64>,
    ols: DVector<f64>,
    residual_variance: f64,
}

impl RegressionData {
    /// Standardizes raw predictors and centers the response.
    pub fn from_raw(raw_x: &DMatrix<f64>, raw_y: &DVector<f64>, names: &[&str]) -> Result<Self> {
        let (n, d) = raw_x.shape();
        if raw_y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: raw_y.len(),
            });
        }
        if n <= d + 1 {
            return Err(Error::InvalidModel(format!(
                "need more rows than predictors ({n} rows, {d} predictors)"
            )));
        }
        let mut x = raw_x.clone();
        for (j, mut col) in x.column_iter_mut().enumerate() {
            let mean = col.mean();
            col.add_scalar_mut(-mean);
            let sd = (col.norm_squared() / n as f64).sqrt();
            if sd <= 1e-12 * mean.abs().max(1.0) {
                let column = names
                    .get(j)
                    .map_or_else(|| format!("#{j}"), |s| s.to_string());
                return Err(Error::ZeroVariance { column });
            }
            col /= sd;
        }
        let y = raw_y.add_scalar(-raw_y.mean());
        let xtx = x.transpose() * &x;
        let xty = x.transpose() * &y;
        let ols = xtx
            .cholesky()
            .ok_or_else(|| Error::InvalidModel("design matrix is rank deficient".into()))?
            .solve(&xty);
        let resid = &y - &x * &ols;
        let residual_variance = resid.norm_squared() / (n - d - 1) as f64;
        Ok(RegressionData {
            x,
            y,
            ols,
            residual_variance,
        })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn ols(&self) -> &DVector<f64> {
        &self.ols
    }

    /// OLS residual variance `RSS/(n − D − 1)`, the default fixed σ².
    pub fn residual_variance(&self) -> f64 {
        self.residual_variance
    }

    /// `‖β̂_OLS‖_q`.
    pub fn ols_q_norm(&self, q: f64) -> f64 {
        self.ols
            .iter()
            .map(|b| b.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    /// The constraint `‖β‖_q ≤ s·‖β̂_OLS‖_q` for shrinkage factor `s`.
    pub fn shrinkage_domain(&self, q: f64, s: f64) -> Result<ConstraintDomain> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "shrinkage factor must be positive, got {s}"
            )));
        }
        ConstraintDomain::q_norm_ball(self.dim(), q, s * self.ols_q_norm(q))
    }
}

/// Potential `RSS(β)/(2σ²) + ‖β‖²/(2σ²)`, evaluated from sufficient statistics.
#[derive(Debug, Clone)]
pub struct RegressionModel {
    xtx: DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    sigma2: f64,
    label: String,
}

impl RegressionModel {
    fn new(data: &RegressionData, sigma2: f64, label: String) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        Ok(RegressionModel {
            xtx: data.x.transpose() * &data.x,
            xty: data.x.transpose() * &data.y,
            yty: data.y.norm_squared(),
            sigma2,
            label,
        })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

pub fn lasso_model(data: &RegressionData, sigma2: f64) -> Result<RegressionModel> {
    RegressionModel::new(data, sigma2, "bayesian lasso".into())
}

/// Same potential as [`lasso_model`]; `q` only selects the constraint.
pub fn bridge_model(data: &RegressionData, sigma2: f64, q: f64) -> Result<RegressionModel> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidModel(format!(
            "bridge exponent q must be positive, got {q}"
        )));
    }
    RegressionModel::new(data, sigma2, format!("bayesian bridge (q = {q})"))
}

impl TargetModel for RegressionModel {
    fn dim(&self) -> usize {
        self.xty.len()
    }

    fn potential(&self, beta: &DVector<f64>) -> f64 {
        let quad = beta.dot(&(&self.xtx * beta));
        let rss = self.yty - 2.0 * beta.dot(&self.xty) + quad;
        (rss + beta.norm_squared()) / (2.0 * self.sigma2)
    }

    fn gradient(&self, beta: &DVector<f64>) -> DVector<f64> {
        (&self.xtx * beta - &self.xty + beta) / self.sigma2
    }

    fn potential_and_gradient(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let xtxb = &self.xtx * beta;
        let rss = self.yty - 2.0 * beta.dot(&self.xty) + beta.dot(&xtxb);
        let u = (rss + beta.norm_squared()) / (2.0 * self.sigma2);
        (u, (xtxb - &self.xty + beta) / self.sigma2)
    }

    fn description(&self) -> String {
        self.label.clone()
    }
}

/// Reads a diabetes-style CSV: header row, ten predictors, response last.
pub fn load_diabetes(path: impl AsRef<Path>) -> Result<RegressionData> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let expected = DIABETES_COLUMNS.len();
    let found = reader.headers()?.len();
    if found != expected {
        return Err(Error::ColumnCount {
            path: path.to_path_buf(),
            expected,
            found,
        });
    }
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != expected {
            return Err(Error::ColumnCount {
                path: path.to_path_buf(),
                expected,
                found: record.len(),
            });
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| malformed(path, line, field))?;
            if !v.is_finite() {
                return Err(malformed(path, line, field));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            line: 1,
            reason: "no data rows".into(),
        });
    }
    let all = DMatrix::from_row_slice(rows, expected, &values);
    let raw_x = all.columns(0, expected - 1).into_owned();
    let raw_y = all.column(expected - 1).into_owned();
    RegressionData::from_raw(&raw_x, &raw_y, &DIABETES_COLUMNS)
}

fn malformed(path: &Path, line: usize, field: &str) -> Error {
    Error::MalformedRow {
        path: PathBuf::from(path),
        line,
        reason: format!("not a finite number: `{field}`"),
    }
}

/// Writes raw predictors and response in the diabetes CSV layout.
pub fn write_regression_csv(
    path: impl AsRef<Path>,
    raw_x: &DMatrix<f64>,
    raw_y: &DVector<f64>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(DIABETES_COLUMNS)?;
    for (i, row) in raw_x.row_iter().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(raw_y[i].to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// A seeded stand-in for the diabetes data: 442 rows, ten correlated
/// predictors on raw scales, and a response from a known sparse coefficient
/// vector (in standardized units) plus Gaussian noise.
///
/// Returns raw predictors, raw response, and the true standardized coefficients.
pub fn synthetic_diabetes(seed: u64) -> (DMatrix<f64>, DVector<f64>, DVector<f64>) {
    const N: usize = 442;
    const D: usize = 10;
    const NOISE_SD: f64 = 8.0;
    let location = [48.5, 1.5, 26.4, 94.6, 189.1, 115.4, 49.8, 4.1, 4.6, 91.3];
    let scale = [13.1, 0.5, 4.4, 13.8, 34.6, 30.4, 12.9, 1.3, 0.5, 11.5];
    let beta_true =
        DVector::from_column_slice(&[0.0, -11.0, 25.0, 15.0, -12.0, 0.0, -9.0, 0.0, 30.0, 0.0]);

    // Correlation pattern loosely following the real predictors.
    let mut corr = DMatrix::<f64>::identity(D, D);
    let mut set = |i: usize, j: usize, r: f64| {
        corr[(i, j)] = r;
        corr[(j, i)] = r;
    };
    set(4, 5, 0.7);
    set(5, 7, 0.5);
    set(6, 7, -0.6);
    set(2, 3, 0.4);
    set(2, 8, 0.4);
    set(3, 8, 0.3);
    set(8, 9, 0.4);
    set(0, 3, 0.3);
    let chol = corr
        .cholesky()
        .expect("fixed correlation is positive definite");
    let l = chol.l();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(N, D, |_, _| rng.sample::<f64, _>(StandardNormal));
    let latent = z * l.transpose();
    let raw_x = DMatrix::from_fn(N, D, |i, j| location[j] + scale[j] * latent[(i, j)]);

    // Standardize with the same convention as `from_raw` so the coefficients
    // are exactly the standardized-unit truth.
    let mut std_x = raw_x.clone();
    for mut col in std_x.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
        let sd = (col.norm_squared() / N as f64).sqrt();
        col /= sd;
    }
    let noise = DVector::from_fn(N, |_, _| NOISE_SD * rng.sample::<f64, _>(StandardNormal));
    let raw_y = (&std_x * &beta_true + noise).add_scalar(152.0);
    (raw_x, raw_y, beta_true)
}
