//! Second-order Farlie–Gumbel–Morgenstern copula for binary spike vectors.
//!
//! With marginal cdfs `Fᵢ` the joint cdf is
//! `H(y) = [1 + Σ_{j<k} β_jk (1−F_j)(1−F_k)] ∏ Fᵢ`, and the pmf of a binary
//! vector is recovered from `H` by inclusion-exclusion over the corners of
//! its unit cell. The pmf is affine in every `β_jk`, so for each firing
//! pattern we precompute `pmf(y; β) = c₀(y) + c(y)ᵀβ` once and evaluate the
//! likelihood and its gradient from pattern counts.
//!
//! The pair parameters live in the diamond `Σ|β_jk| ≤ 1`, which keeps every
//! pmf value in `[0, 1]`.

use std::path::Path;

use nalgebra::DVector;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TargetModel;
use crate::constraints::ConstraintDomain;
use crate::error::{Error, Result};

/// Inclusion-exclusion enumerates `2^n` patterns; keep `n` small.
pub const MAX_NEURONS: usize = 15;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(j, k)`, `j < k`, in lexicographic order.
pub fn pair_index(j: usize, k: usize, n: usize) -> usize {
    debug_assert!(j < k && k < n);
    j * (2 * n - j - 1) / 2 + (k - j - 1)
}

/// Binary firing indicators, one row per neuron and one column per time bin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeData {
    spikes: Vec<Vec<u8>>,
    firing_rates: Vec<f64>,
}

impl SpikeData {
    pub fn new(spikes: Vec<Vec<u8>>) -> Result<Self> {
        let n = spikes.len();
        if n < 2 || n > MAX_NEURONS {
            return Err(Error::InvalidModel(format!(
                "need between 2 and {MAX_NEURONS} neurons, got {n}"
            )));
        }
        let bins = spikes[0].len();
        let mut firing_rates = Vec::with_capacity(n);
        for (i, row) in spikes.iter().enumerate() {
            if row.len() != bins {
                return Err(Error::InvalidModel(format!(
                    "neuron {i} has {} bins, expected {bins}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&v| v > 1) {
                return Err(Error::InvalidModel(format!(
                    "neuron {i}: entry {bad} is not 0/1"
                )));
            }
            let rate = row.iter().map(|&v| v as f64).sum::<f64>() / bins as f64;
            if !(rate > 0.0 && rate < 1.0) {
                return Err(Error::InvalidModel(format!(
                    "neuron {i}: firing rate {rate} must be strictly between 0 and 1"
                )));
            }
            firing_rates.push(rate);
        }
        Ok(SpikeData {
            spikes,
            firing_rates,
        })
    }

    /// Reads a headerless 0/1 CSV with one row per neuron.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)?;
        let mut spikes = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| match f {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(Error::MalformedRow {
                        path: path.to_path_buf(),
                        line: i + 1,
                        reason: format!("expected 0 or 1, found `{other}`"),
                    }),
                })
                .collect::<Result<Vec<u8>>>()?;
            spikes.push(row);
        }
        SpikeData::new(spikes)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(path)?;
        for row in &self.spikes {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn n_neurons(&self) -> usize {
        self.spikes.len()
    }

    pub fn n_bins(&self) -> usize {
        self.spikes[0].len()
    }

    pub fn spikes(&self) -> &[Vec<u8>] {
        &self.spikes
    }

    /// Empirical per-neuron firing probabilities.
    pub fn firing_rates(&self) -> &[f64] {
        &self.firing_rates
    }

    /// Number of bins showing each firing pattern; bit `i` of the index is neuron `i`.
    pub fn pattern_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; 1 << self.n_neurons()];
        for t in 0..self.n_bins() {
            let mut mask = 0;
            for (i, row) in self.spikes.iter().enumerate() {
                if row[t] == 1 {
                    mask |= 1 << i;
                }
            }
            counts[mask] += 1;
        }
        counts
    }
}

/// `pmf(y; β) = constant + slopeᵀβ` for one pattern `y`.
#[derive(Debug, Clone)]
struct AffinePmf {
    constant: f64,
    slope: DVector<f64>,
}

impl AffinePmf {
    fn eval(&self, beta: &DVector<f64>) -> f64 {
        self.constant + self.slope.dot(beta)
    }
}

/// Builds the affine pmf coefficients of pattern `mask` by inclusion-exclusion.
fn affine_pmf(mask: usize, firing: &[f64]) -> AffinePmf {
    let n = firing.len();
    let all = (1usize << n) - 1;
    let silent = all & !mask;
    let mut constant = 0.0;
    let mut slope = DVector::zeros(pair_count(n));
    // Corners of the cell: each fired neuron is either kept at 1 (cdf 1)
    // or lowered to 0; `lowered` enumerates submasks of `mask`.
    let mut lowered = mask;
    loop {
        let at_zero = silent | lowered;
        let sign = if lowered.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let cdf: f64 = (0..n)
            .filter(|i| at_zero >> i & 1 == 1)
            .map(|i| 1.0 - firing[i])
            .product();
        constant += sign * cdf;
        for j in 0..n {
            if at_zero >> j & 1 == 0 {
                continue;
            }
            for k in j + 1..n {
                if at_zero >> k & 1 == 1 {
                    slope[pair_index(j, k, n)] += sign * cdf * firing[j] * firing[k];
                }
            }
        }
        if lowered == 0 {
            break;
        }
        lowered = (lowered - 1) & mask;
    }
    AffinePmf { constant, slope }
}

/// The full pmf over all `2^n` patterns for given marginals and pair parameters.
pub fn fgm_pmf(firing: &[f64], beta: &DVector<f64>) -> Vec<f64> {
    (0..1usize << firing.len())
        .map(|mask| affine_pmf(mask, firing).eval(beta))
        .collect()
}

/// Negative log-likelihood of spike data under the FGM copula with
/// plug-in empirical marginals. Parameters are the pair couplings `β_jk`.
#[derive(Debug, Clone)]
pub struct FgmCopulaModel {
    n_neurons: usize,
    firing: Vec<f64>,
    terms: Vec<(f64, AffinePmf)>,
}

impl FgmCopulaModel {
    pub fn new(data: &SpikeData) -> Result<Self> {
        let firing = data.firing_rates().to_vec();
        let terms = data
            .pattern_counts()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(mask, c)| (c as f64, affine_pmf(mask, &firing)))
            .collect();
        Ok(FgmCopulaModel {
            n_neurons: data.n_neurons(),
            firing,
            terms,
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    pub fn firing_rates(&self) -> &[f64] {
        &self.firing
    }

    /// The pmf of pattern `mask` at `beta`.
    pub fn pmf(&self, mask: usize, beta: &DVector<f64>) -> f64 {
        affine_pmf(mask, &self.firing).eval(beta)
    }

    /// The diamond `Σ|β_jk| ≤ 1` on the pair parameters.
    pub fn domain(&self) -> ConstraintDomain {
        ConstraintDomain::q_norm_ball(pair_count(self.n_neurons), 1.0, 1.0)
            .expect("pair count is positive for n >= 2")
    }
}

impl TargetModel for FgmCopulaModel {
    fn dim(&self) -> usize {
        pair_count(self.n_neurons)
    }

    fn potential(&self, beta: &DVector<f64>) -> f64 {
        let mut u = 0.0;
        for (count, pmf) in &self.terms {
            let p = pmf.eval(beta);
            if !(p > 0.0) {
                return f64::INFINITY;
            }
            u -= count * p.ln();
        }
        u
    }

    fn gradient(&self, beta: &DVector<f64>) -> DVector<f64> {
        self.potential_and_gradient(beta).1
    }

    fn potential_and_gradient(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let mut u = 0.0;
        let mut g = DVector::zeros(self.dim());
        for (count, pmf) in &self.terms {
            let p = pmf.eval(beta);
            if !(p > 0.0) {
                return (f64::INFINITY, DVector::from_element(self.dim(), f64::NAN));
            }
            u -= count * p.ln();
            g.axpy(-count / p, &pmf.slope, 1.0);
        }
        (u, g)
    }

    fn description(&self) -> String {
        format!("fgm copula over {} neurons", self.n_neurons)
    }
}

/// Samples `n_bins` binary vectors from the FGM joint pmf.
pub fn synth_spikes(
    firing: &[f64],
    n_bins: usize,
    coupling: &DVector<f64>,
    seed: u64,
) -> Result<SpikeData> {
    let n = firing.len();
    if !(2..=MAX_NEURONS).contains(&n) {
        return Err(Error::InvalidModel(format!(
            "need between 2 and {MAX_NEURONS} neurons"
        )));
    }
    if coupling.len() != pair_count(n) {
        return Err(Error::DimensionMismatch {
            expected: pair_count(n),
            found: coupling.len(),
        });
    }
    if let Some(p) = firing.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::InvalidModel(format!(
            "firing probability {p} not in (0, 1)"
        )));
    }
    let l1: f64 = coupling.iter().map(|b| b.abs()).sum();
    if l1 > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain(format!(
            "coupling has sum |beta| = {l1} > 1"
        )));
    }
    let pmf: Vec<f64> = fgm_pmf(firing, coupling)
        .into_iter()
        .map(|p| p.max(0.0))
        .collect();
    let dist = WeightedIndex::new(&pmf).map_err(|e| Error::InvalidModel(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spikes = vec![vec![0u8; n_bins]; n];
    for t in 0..n_bins {
        let mask = dist.sample(&mut rng);
        for (i, row) in spikes.iter_mut().enumerate() {
            row[t] = (mask >> i & 1) as u8;
        }
    }
    SpikeData::new(spikes)
}
