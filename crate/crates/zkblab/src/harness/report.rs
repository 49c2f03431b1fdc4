//! JSON and CSV output of verdicts.
//!
//! One JSON file per verdict, `<dir>/<experiment>/<verdict>.json`, and one
//! CSV per series, `<dir>/<experiment>/<verdict>__<label>.csv` with header
//! `t,value`. Nothing time-dependent is written, so reruns are byte-identical.

use super::{Experiment, RateSeries, Verdict};
use crate::error::Result;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// The per-verdict JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct JsonReport<'a> {
    pub experiment: &'a str,
    pub verdict: &'a str,
    pub config_hash: &'a str,
    pub seed: u64,
    pub series: &'a [RateSeries],
    pub slope: Option<f64>,
    pub slope_ci: Option<f64>,
    pub intercept: Option<f64>,
    pub residuals: Option<&'a [f64]>,
    pub theory_slope: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub skipped: bool,
    pub rule: &'a str,
    pub summary: &'a str,
    pub notes: &'a [String],
}

impl<'a> JsonReport<'a> {
    pub fn new(v: &'a Verdict, config_hash: &'a str, seed: u64) -> Self {
        let fit = v.fit.as_ref();
        JsonReport {
            experiment: &v.experiment,
            verdict: &v.name,
            config_hash,
            seed,
            series: &v.series,
            slope: fit.map(|f| f.slope),
            slope_ci: fit.map(|f| f.slope_ci),
            intercept: fit.map(|f| f.intercept),
            residuals: fit.map(|f| f.residuals.as_slice()),
            theory_slope: fit.and_then(|f| f.theory_slope),
            tolerance: fit.and_then(|f| f.tolerance),
            pass: v.pass,
            skipped: v.skipped,
            rule: &v.rule,
            summary: &v.summary,
            notes: &v.notes,
        }
    }
}

/// `t,value` rows.
pub fn write_series_csv(path: impl AsRef<Path>, s: &RateSeries) -> Result<()> {
    let mut out = String::from("t,value\n");
    for (t, v) in &s.points {
        writeln!(out, "{t},{v}").expect("write to string");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes every verdict of `exp` under `dir/<experiment>/`.
pub fn write_experiment(dir: &Path, exp: &Experiment, config_hash: &str, seed: u64) -> Result<()> {
    let sub = dir.join(&exp.name);
    std::fs::create_dir_all(&sub)?;
    for v in &exp.verdicts {
        let json = serde_json::to_string_pretty(&JsonReport::new(v, config_hash, seed))
            .map_err(|e| crate::Error::Io(e.to_string()))?;
        std::fs::write(sub.join(format!("{}.json", v.name)), json + "\n")?;
        for s in &v.series {
            write_series_csv(sub.join(format!("{}__{}.csv", v.name, s.label)), s)?;
        }
    }
    Ok(())
}
