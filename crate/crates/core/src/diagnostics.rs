//! Effective sample size, importance-weighted moments, resampling, and the
//! per-chain efficiency report.

use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::samplers::Chain;

/// Shortest series [`ess`] accepts.
pub const MIN_SERIES_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssEstimate {
    pub ess: f64,
    /// The series was constant; `ess` is 1 by convention.
    pub degenerate: bool,
    /// Last autocorrelation lag included in the sum.
    pub max_lag: usize,
}

/// Geyer's initial monotone sequence estimator.
///
/// Autocorrelations are summed in adjacent pairs `Γ_m = ρ(2m) + ρ(2m+1)`
/// while the pairs stay positive, each pair capped by its predecessor, and
/// `ESS = B / (2 Σ Γ_m − 1)` is clamped to `[1, B]`. Lags are computed
/// lazily, so the cost is `O(B·K)` for a truncation lag `K ≤ B/2`.
pub fn ess(series: &[f64]) -> Result<EssEstimate> {
    let b = series.len();
    if b < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            len: b,
            min: MIN_SERIES_LEN,
        });
    }
    let mean = series.iter().sum::<f64>() / b as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let autocov = |k: usize| {
        centered[..b - k]
            .iter()
            .zip(&centered[k..])
            .map(|(a, c)| a * c)
            .sum::<f64>()
            / b as f64
    };
    let c0 = autocov(0);
    if !(c0 > 0.0) || series.iter().all(|&x| x == series[0]) {
        return Ok(EssEstimate {
            ess: 1.0,
            degenerate: true,
            max_lag: 0,
        });
    }

    let max_lag = b / 2;
    let mut gamma_sum = 1.0 + autocov(1) / c0;
    let mut prev = gamma_sum;
    let mut last_lag = 1;
    let mut m = 1;
    while 2 * m + 1 <= max_lag {
        let pair = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        gamma_sum += pair;
        prev = pair;
        last_lag = 2 * m + 1;
        m += 1;
    }
    let tau = 2.0 * gamma_sum - 1.0;
    let raw = if tau > 0.0 { b as f64 / tau } else { b as f64 };
    Ok(EssEstimate {
        ess: raw.clamp(1.0, b as f64),
        degenerate: false,
        max_lag: last_lag,
    })
}

/// ESS that falls back to the series length for series too short to analyse.
pub fn ess_or_len(series: &[f64]) -> f64 {
    match ess(series) {
        Ok(e) => e.ess,
        Err(_) => series.len().max(1) as f64,
    }
}

fn check_weights(n_draws: usize, weights: &[f64]) -> Result<f64> {
    if weights.len() != n_draws {
        return Err(Error::DimensionMismatch {
            expected: n_draws,
            found: weights.len(),
        });
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidModel(format!(
            "importance weight {w} is not a finite non-negative number"
        )));
    }
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::ZeroWeights)
    }
}

/// Self-normalized importance estimates of the mean and covariance
/// (covariance normalized by `Σw`).
pub fn weighted_moments(
    draws: &[DVector<f64>],
    weights: &[f64],
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_weights(draws.len(), weights)?;
    let dim = draws[0].len();
    // Equal weights reduce to plain sample moments, bit for bit.
    let unit;
    let weights = if weights.iter().all(|w| *w == weights[0]) {
        unit = vec![1.0; weights.len()];
        &unit
    } else {
        weights
    };
    let total: f64 = weights.iter().sum();
    let mut mean = DVector::zeros(dim);
    for (x, w) in draws.iter().zip(weights) {
        mean.axpy(*w, x, 1.0);
    }
    mean /= total;
    let mut cov = DMatrix::zeros(dim, dim);
    for (x, w) in draws.iter().zip(weights) {
        let d = x - &mean;
        cov.ger(*w, &d, &d, 1.0);
    }
    cov /= total;
    Ok((mean, cov))
}

/// Monte Carlo standard error of each coordinate of the weighted mean.
///
/// Uses the ratio-estimator linearization `z_t = w_t (x_t − μ̂) / w̄` and the
/// autocorrelation-adjusted variance `Var(z) / ESS(z)`.
pub fn weighted_mean_standard_errors(
    draws: &[DVector<f64>],
    weights: &[f64],
) -> Result<DVector<f64>> {
    let total = check_weights(draws.len(), weights)?;
    let (mean, _) = weighted_moments(draws, weights)?;
    let b = draws.len() as f64;
    let w_bar = total / b;
    Ok(DVector::from_fn(mean.len(), |j, _| {
        let z: Vec<f64> = draws
            .iter()
            .zip(weights)
            .map(|(x, w)| w * (x[j] - mean[j]) / w_bar)
            .collect();
        let z_mean = z.iter().sum::<f64>() / b;
        let var = z.iter().map(|v| (v - z_mean).powi(2)).sum::<f64>() / b;
        (var / ess_or_len(&z)).sqrt()
    }))
}

/// The weighted `p`-quantile: the smallest value whose cumulative normalized
/// weight reaches `p`.
pub fn weighted_quantile(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    let total = check_weights(values.len(), weights)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let target = p.clamp(0.0, 1.0) * total;
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if cum >= target && weights[i] > 0.0 {
            return Ok(values[i]);
        }
    }
    Ok(values[*order
        .iter()
        .rev()
        .find(|&&i| weights[i] > 0.0)
        .expect("positive total weight")])
}

/// Multinomial resampling proportional to `weights`; the output has the
/// same length as the input.
pub fn resample<R: Rng + ?Sized>(
    draws: &[DVector<f64>],
    weights: &[f64],
    rng: &mut R,
) -> Result<Vec<DVector<f64>>> {
    check_weights(draws.len(), weights)?;
    let index = WeightedIndex::new(weights).map_err(|_| Error::ZeroWeights)?;
    Ok((0..draws.len())
        .map(|_| draws[index.sample(rng)].clone())
        .collect())
}

/// Efficiency summary of one chain. `min_ess_per_sec` is `None` when no
/// timing is available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssReport {
    pub ess: Vec<f64>,
    pub ess_min: f64,
    pub ess_med: f64,
    pub ess_max: f64,
    pub accept_rate: f64,
    pub seconds: f64,
    pub min_ess_per_sec: Option<f64>,
    pub num_draws: usize,
}

impl EssReport {
    /// Builds a report from per-coordinate traces.
    pub fn from_columns(columns: &[Vec<f64>], accept_rate: f64, seconds: f64) -> Result<Self> {
        let num_draws = columns.first().map_or(0, Vec::len);
        if num_draws == 0 {
            return Err(Error::SeriesTooShort { len: 0, min: 1 });
        }
        let ess: Vec<f64> = columns.iter().map(|c| ess_or_len(c)).collect();
        let mut sorted = ess.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let ess_med = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let ess_min = sorted[0];
        Ok(EssReport {
            ess_min,
            ess_med,
            ess_max: sorted[n - 1],
            ess,
            accept_rate,
            seconds,
            min_ess_per_sec: (seconds > 0.0).then(|| ess_min / seconds),
            num_draws,
        })
    }
}

pub fn efficiency_report(chain: &Chain) -> Result<EssReport> {
    let columns: Vec<Vec<f64>> = (0..chain.dim()).map(|j| chain.coordinate(j)).collect();
    EssReport::from_columns(&columns, chain.acceptance_rate(), chain.elapsed_seconds)
}
