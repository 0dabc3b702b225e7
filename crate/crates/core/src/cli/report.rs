//! Report records and their JSON / CSV serialization.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Whether a check bounds its statistic from above or from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

/// Tallies for classification sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub satisfied: usize,
    pub unsatisfied: usize,
    pub mismatches: usize,
}

/// One named check.
///
/// For [`Bound::Upper`] checks `max_residual` is the largest residual; for
/// [`Bound::Lower`] checks it is the smallest observed value, which must
/// reach `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
}

impl CheckResult {
    /// Upper-bound check over a list of residuals.
    pub fn upper(name: impl Into<String>, residuals: &[f64], tolerance: f64) -> Self {
        let max = residuals.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let mean = if residuals.is_empty() { 0.0 } else { residuals.iter().sum::<f64>() / residuals.len() as f64 };
        Self {
            name: name.into(),
            max_residual: max,
            mean_residual: mean,
            samples: residuals.len(),
            tolerance,
            bound: Bound::Upper,
            pass: max <= tolerance,
            counts: None,
        }
    }

    /// Lower-bound check: the smallest value must be at least `tolerance`.
    pub fn lower(name: impl Into<String>, values: &[f64], tolerance: f64) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = if values.is_empty() { 0.0 } else { values.iter().sum::<f64>() / values.len() as f64 };
        Self {
            name: name.into(),
            max_residual: if values.is_empty() { 0.0 } else { min },
            mean_residual: mean,
            samples: values.len(),
            tolerance,
            bound: Bound::Lower,
            pass: values.is_empty() || min >= tolerance,
            counts: None,
        }
    }

    /// A yes/no check; the residual is 0 on success and 1 on failure.
    pub fn boolean(name: impl Into<String>, ok: bool, samples: usize) -> Self {
        let r = if ok { 0.0 } else { 1.0 };
        Self::upper(name, &[r], 0.0).with_samples(samples)
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_counts(mut self, counts: Counts) -> Self {
        self.counts = Some(counts);
        self
    }
}

/// One row of a mean-curvature table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub kind: String,
    pub r: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub command: String,
    pub spec: Option<String>,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(command: &str, spec: Option<String>, seed: u64) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("damek-ricci".to_string(), env!("CARGO_PKG_VERSION").to_string());
        versions.insert("report".to_string(), "1".to_string());
        Self { command: command.to_string(), spec, seed, versions }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<CurvatureRow>>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// Serialize a report. CSV output lists the check records, or the table
/// rows when the report carries a table.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| Error::InvalidInput(format!("json: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(table) = &report.table {
                w.write_record(["kind", "r", "h"]).map_err(csv_error)?;
                for row in table {
                    w.write_record([row.kind.clone(), row.r.to_string(), row.h.to_string()]).map_err(csv_error)?;
                }
            } else {
                w.write_record([
                    "name",
                    "max_residual",
                    "mean_residual",
                    "samples",
                    "tolerance",
                    "bound",
                    "pass",
                    "satisfied",
                    "unsatisfied",
                    "mismatches",
                ])
                .map_err(csv_error)?;
                for r in &report.results {
                    let counts = |f: fn(&Counts) -> usize| r.counts.as_ref().map(|c| f(c).to_string()).unwrap_or_default();
                    w.write_record([
                        r.name.clone(),
                        r.max_residual.to_string(),
                        r.mean_residual.to_string(),
                        r.samples.to_string(),
                        r.tolerance.to_string(),
                        match r.bound {
                            Bound::Upper => "upper".to_string(),
                            Bound::Lower => "lower".to_string(),
                        },
                        r.pass.to_string(),
                        counts(|c| c.satisfied),
                        counts(|c| c.unsatisfied),
                        counts(|c| c.mismatches),
                    ])
                    .map_err(csv_error)?;
                }
            }
            w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))
        }
    }
}

/// Write a report to `path` atomically (temporary file, then rename), or
/// to standard output when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> std::io::Result<()> {
    let bytes = render(report, format).map_err(std::io::Error::other)?;
    match path {
        None => std::io::stdout().write_all(&bytes),
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(&bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
