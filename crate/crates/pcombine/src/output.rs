//! Serialisable views of the core result types and the shared writers.
//!
//! Floats are written in their shortest round-trip form, so every value
//! parses back to the identical `f64`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use pcombine_core::simulate::{MethodResult, MonteCarloReport};
use pcombine_core::thresholds::Diagnostics;
use pcombine_core::{CovarianceModel, ExperimentPlan, TestReport, ThresholdResult};

use crate::CliError;

/// Opens `path` for writing, or stdout.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            CliError::Io {
                path: p.to_owned(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(|e| CliError::Output(e.to_string()))?;
    out.flush().map_err(|e| CliError::Output(e.to_string()))
}

/// `f64` as CSV text: shortest round-trip digits, `NaN`/`inf` spelled out.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[derive(Debug, Serialize)]
pub struct DiagnosticsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_quantile: Option<f64>,
}

impl From<&Diagnostics> for DiagnosticsJson {
    fn from(d: &Diagnostics) -> Self {
        Self {
            x_k: d.x_k,
            residual: d.residual,
            bracket_residual: d.bracket_residual,
            delta: d.delta,
            stable_quantile: d.stable_quantile,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ThresholdJson {
    pub kind: String,
    pub family: String,
    pub alpha: f64,
    pub k: Option<usize>,
    pub mean_scale_threshold: f64,
    pub stat_scale_threshold: f64,
    pub diagnostics: DiagnosticsJson,
}

impl From<&ThresholdResult> for ThresholdJson {
    fn from(t: &ThresholdResult) -> Self {
        Self {
            kind: t.kind.to_string(),
            family: t.family.to_string(),
            alpha: t.alpha,
            k: t.k,
            mean_scale_threshold: t.mean_scale_threshold,
            stat_scale_threshold: t.stat_scale_threshold,
            diagnostics: (&t.diagnostics).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TestReportJson {
    pub file: Option<PathBuf>,
    pub kind: String,
    pub family: String,
    pub alpha: f64,
    pub k: usize,
    pub statistic: f64,
    pub mean_scale: f64,
    pub mean_scale_threshold: f64,
    pub stat_scale_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_pvalue: Option<f64>,
    pub reject: bool,
    pub decision: &'static str,
}

impl TestReportJson {
    pub fn new(r: &TestReport, file: Option<PathBuf>) -> Self {
        Self {
            file,
            kind: r.kind.to_string(),
            family: r.family.to_string(),
            alpha: r.alpha,
            k: r.k,
            statistic: r.statistic,
            mean_scale: r.mean_scale,
            mean_scale_threshold: r.mean_scale_threshold,
            stat_scale_threshold: r.stat_scale_threshold,
            approx_pvalue: r.approx_pvalue,
            reject: r.reject,
            decision: if r.reject { "reject" } else { "accept" },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanJson {
    pub k: usize,
    pub covariance: &'static str,
    pub rho: f64,
    pub signal: String,
    pub strength: f64,
    pub sign_mode: String,
    pub alpha: f64,
    pub replicates: u64,
    pub seed: u64,
    pub side: String,
}

pub fn covariance_name(c: &CovarianceModel) -> &'static str {
    match c {
        CovarianceModel::Independent => "independent",
        CovarianceModel::Ar1 { .. } => "ar1",
        CovarianceModel::CompoundSymmetry { .. } => "compound-symmetry",
    }
}

impl From<&ExperimentPlan> for PlanJson {
    fn from(p: &ExperimentPlan) -> Self {
        Self {
            k: p.k,
            covariance: covariance_name(&p.covariance),
            rho: p.covariance.rho(),
            signal: p.signal.pattern.to_string(),
            strength: p.signal.strength,
            sign_mode: p.signal.sign_mode.to_string(),
            alpha: p.alpha,
            replicates: p.replicates,
            seed: p.seed,
            side: p.side.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MethodResultJson {
    pub kind: String,
    pub family: String,
    pub rejections: u64,
    pub replicates: u64,
    pub frequency: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl From<&MethodResult> for MethodResultJson {
    fn from(r: &MethodResult) -> Self {
        Self {
            kind: r.method.kind.to_string(),
            family: r.method.family.to_string(),
            rejections: r.rejections,
            replicates: r.replicates,
            frequency: r.frequency,
            wilson_lo: r.wilson_lo,
            wilson_hi: r.wilson_hi,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub name: String,
    pub plan: PlanJson,
    pub thresholds: Vec<ThresholdJson>,
    pub results: Vec<MethodResultJson>,
    pub wall_time_secs: f64,
}

impl ReportJson {
    pub fn new(name: &str, report: &MonteCarloReport, wall_time_secs: f64) -> Self {
        Self {
            name: name.to_string(),
            plan: (&report.plan).into(),
            thresholds: report.thresholds.iter().map(Into::into).collect(),
            results: report.results.iter().map(Into::into).collect(),
            wall_time_secs,
        }
    }
}

pub const REPORT_CSV_HEADER: [&str; 17] = [
    "plan",
    "k",
    "covariance",
    "rho",
    "signal",
    "sign_mode",
    "strength",
    "side",
    "alpha",
    "seed",
    "kind",
    "family",
    "replicates",
    "rejections",
    "frequency",
    "wilson_lo",
    "wilson_hi",
];

/// One long-format row per method.
pub fn report_csv_rows(name: &str, report: &MonteCarloReport) -> Vec<Vec<String>> {
    let p = &report.plan;
    report
        .results
        .iter()
        .map(|r| {
            vec![
                name.to_string(),
                p.k.to_string(),
                covariance_name(&p.covariance).to_string(),
                num(p.covariance.rho()),
                p.signal.pattern.to_string(),
                p.signal.sign_mode.to_string(),
                num(p.signal.strength),
                p.side.to_string(),
                num(p.alpha),
                p.seed.to_string(),
                r.method.kind.to_string(),
                r.method.family.to_string(),
                r.replicates.to_string(),
                r.rejections.to_string(),
                num(r.frequency),
                num(r.wilson_lo),
                num(r.wilson_hi),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12.706204736174705, 5e-324] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        let s = serde_json::to_string(&0.1f64).unwrap();
        assert_eq!(s, "0.1");
    }
}
