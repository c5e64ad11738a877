//! Result files: per-cell draws CSV and report JSON, the summary table, and
//! the run manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constraints::{ConstraintDomain, DOMAIN_TOL};
use crate::diagnostics::EssReport;
use crate::error::{Error, Result};
use crate::samplers::{Chain, SamplerKind};

/// Covariance columns are only written up to this dimension.
pub const MAX_COV_DIM: usize = 10;

pub fn draws_file_name(sampler: SamplerKind, seed: u64) -> String {
    format!("draws_{sampler}_seed{seed}.csv")
}

pub fn report_file_name(sampler: SamplerKind, seed: u64) -> String {
    format!("report_{sampler}_seed{seed}.json")
}

pub fn draws_header(dim: usize) -> Vec<String> {
    (0..dim)
        .map(|j| format!("dim_{j}"))
        .chain(["weight".into(), "accepted".into()])
        .collect()
}

/// Writes one row per retained draw, re-checking the constraint on every row.
pub fn write_draws(path: &Path, chain: &Chain, domain: &ConstraintDomain) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(draws_header(domain.dim()))?;
    for (row, ((beta, weight), accepted)) in chain
        .draws
        .iter()
        .zip(&chain.weights)
        .zip(&chain.accepts)
        .enumerate()
    {
        if !domain.contains(beta, DOMAIN_TOL) {
            return Err(Error::OutsideDomain(format!(
                "draw {row} violates {} by {:e}",
                domain.describe(),
                domain.violation(beta)
            )));
        }
        let mut record: Vec<String> = beta.iter().map(|x| x.to_string()).collect();
        record.push(weight.to_string());
        record.push(if *accepted { "1" } else { "0" }.into());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// A draws CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawsTable {
    /// One trace per coordinate.
    pub columns: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub accepted: Vec<bool>,
}

impl DrawsTable {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accepted.is_empty() {
            return 0.0;
        }
        self.accepted.iter().filter(|a| **a).count() as f64 / self.accepted.len() as f64
    }

    pub fn draws(&self) -> Vec<DVector<f64>> {
        (0..self.len())
            .map(|i| DVector::from_fn(self.dim(), |j, _| self.columns[j][i]))
            .collect()
    }
}

pub fn read_draws(path: impl AsRef<Path>) -> Result<DrawsTable> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let found = header.len();
    if found < 3 {
        return Err(Error::ColumnCount {
            path: path.to_path_buf(),
            expected: 3,
            found,
        });
    }
    let dim = found - 2;
    if header != draws_header(dim) {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            line: 1,
            reason: format!("header must be dim_0,…,dim_{},weight,accepted", dim - 1),
        });
    }
    let mut table = DrawsTable {
        columns: vec![Vec::new(); dim],
        weights: Vec::new(),
        accepted: Vec::new(),
    };
    for (i, record) in r.records().enumerate() {
        let line = i + 2;
        let record = record?;
        if record.len() != found {
            return Err(Error::ColumnCount {
                path: path.to_path_buf(),
                expected: found,
                found: record.len(),
            });
        }
        let bad = |reason: String| Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason,
        };
        for j in 0..=dim {
            let v: f64 = record[j]
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{}` is not a number", &record[j])))?;
            if j < dim {
                table.columns[j].push(v);
            } else {
                table.weights.push(v);
            }
        }
        table.accepted.push(match record[dim + 1].trim() {
            "1" | "true" => true,
            "0" | "false" => false,
            other => return Err(bad(format!("accepted flag `{other}` must be 0 or 1"))),
        });
    }
    Ok(table)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

/// One summary row: a (sampler, seed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sampler: SamplerKind,
    pub seed: u64,
    pub report: EssReport,
    pub mean: DVector<f64>,
    pub std_error: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub bounces_per_iter: f64,
    pub outside_rejections: usize,
}

pub fn write_summary(path: &Path, dim: usize, rows: &[SummaryRow]) -> Result<()> {
    let mut header: Vec<String> = [
        "sampler",
        "seed",
        "num_draws",
        "accept_rate",
        "ess_min",
        "ess_med",
        "ess_max",
        "seconds",
        "min_ess_per_sec",
        "bounces_per_iter",
        "outside_rejections",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..dim).map(|j| format!("mean_{j}")));
    header.extend((0..dim).map(|j| format!("se_{j}")));
    let with_cov = dim <= MAX_COV_DIM;
    if with_cov {
        for i in 0..dim {
            header.extend((i..dim).map(|j| format!("cov_{i}_{j}")));
        }
    }
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(&header)?;
    for row in rows {
        let r = &row.report;
        let mut rec = vec![
            row.sampler.to_string(),
            row.seed.to_string(),
            r.num_draws.to_string(),
            r.accept_rate.to_string(),
            r.ess_min.to_string(),
            r.ess_med.to_string(),
            r.ess_max.to_string(),
            r.seconds.to_string(),
            r.min_ess_per_sec
                .map_or_else(String::new, |v| v.to_string()),
            row.bounces_per_iter.to_string(),
            row.outside_rejections.to_string(),
        ];
        rec.extend(row.mean.iter().map(|v| v.to_string()));
        rec.extend(row.std_error.iter().map(|v| v.to_string()));
        if with_cov {
            for i in 0..dim {
                rec.extend((i..dim).map(|j| row.covariance[(i, j)].to_string()));
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStatus {
    pub sampler: SamplerKind,
    pub seed: u64,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `manifest.json`: what ran, where the files are, and whether every cell finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub complete: bool,
    /// The resolved configuration, loadable as a config file.
    pub config: PathBuf,
    pub summary: Option<PathBuf>,
    pub cells: Vec<CellStatus>,
}
