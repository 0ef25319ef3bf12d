//! Tables and plain-text summaries written by the experiment runner.
//!
//! Floats are printed with 17 significant digits so values survive a round
//! trip through the text files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::config::ReportFormat;
use crate::error::{Error, Result};
use crate::geom::Vec3;

pub const ROW_HEADER: [&str; 12] = [
    "experiment_id",
    "level",
    "s",
    "raw_re",
    "raw_im",
    "refined_re",
    "refined_im",
    "oracle_re",
    "oracle_im",
    "abs_error",
    "d_abs",
    "warnings",
];

pub const PLANE_HEADER: [&str; 14] = [
    "experiment_id",
    "target",
    "x",
    "y",
    "z",
    "ray",
    "range",
    "psi_hat_re",
    "psi_hat_im",
    "psi_true_re",
    "psi_true_im",
    "rel_error",
    "status",
    "message",
];

pub const SYNTH_HEADER: [&str; 10] = [
    "experiment_id",
    "s",
    "x",
    "y",
    "z",
    "psi1_re",
    "psi1_im",
    "total_re",
    "total_im",
    "intensity",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// One (level, radius) line of a recovery table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment_id: String,
    pub level: usize,
    pub s: f64,
    pub raw: Complex64,
    pub refined: Complex64,
    pub oracle: Option<Complex64>,
    pub d_abs: f64,
    pub warnings: Vec<String>,
}

impl ResultRow {
    /// `|refined − oracle|`, present only with an oracle.
    pub fn abs_error(&self) -> Option<f64> {
        self.oracle.map(|o| (self.refined - o).norm())
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.experiment_id.clone(),
            self.level.to_string(),
            fmt_f64(self.s),
            fmt_f64(self.raw.re),
            fmt_f64(self.raw.im),
            fmt_f64(self.refined.re),
            fmt_f64(self.refined.im),
            fmt_opt(self.oracle.map(|o| o.re)),
            fmt_opt(self.oracle.map(|o| o.im)),
            fmt_opt(self.abs_error()),
            fmt_f64(self.d_abs),
            self.warnings.join("; "),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRow {
    pub experiment_id: String,
    pub target: usize,
    pub point: Vec3,
    pub ray: Option<usize>,
    pub range: f64,
    pub estimate: Option<Complex64>,
    pub truth: Option<Complex64>,
    pub rel_error: Option<f64>,
    pub passed: bool,
    pub message: String,
}

impl PlaneRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.experiment_id.clone(),
            self.target.to_string(),
            fmt_f64(self.point[0]),
            fmt_f64(self.point[1]),
            fmt_f64(self.point[2]),
            self.ray.map(|r| r.to_string()).unwrap_or_default(),
            if self.range.is_finite() { fmt_f64(self.range) } else { String::new() },
            fmt_opt(self.estimate.map(|v| v.re)),
            fmt_opt(self.estimate.map(|v| v.im)),
            fmt_opt(self.truth.map(|v| v.re)),
            fmt_opt(self.truth.map(|v| v.im)),
            fmt_opt(self.rel_error),
            if self.passed { "ok" } else { "failed" }.into(),
            self.message.clone(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthRow {
    pub experiment_id: String,
    pub s: f64,
    pub point: Vec3,
    pub radiated: Complex64,
    pub total: Complex64,
    pub intensity: f64,
}

impl SynthRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.experiment_id.clone(),
            fmt_f64(self.s),
            fmt_f64(self.point[0]),
            fmt_f64(self.point[1]),
            fmt_f64(self.point[2]),
            fmt_f64(self.radiated.re),
            fmt_f64(self.radiated.im),
            fmt_f64(self.total.re),
            fmt_f64(self.total.im),
            fmt_f64(self.intensity),
        ]
    }
}

/// A named pass/fail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Plain-text summary: free-form lines followed by check verdicts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub experiment_id: String,
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment: {}", self.experiment_id);
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "warnings:");
            for w in &self.warnings {
                let _ = writeln!(out, "  - {w}");
            }
        }
        let _ = writeln!(out, "checks:");
        if self.checks.is_empty() {
            let _ = writeln!(out, "  (none configured)");
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  [{verdict}] {}: {}", c.name, c.detail);
        }
        let _ = writeln!(out, "status: {}", if self.passed() { "ok" } else { "failed" });
        out
    }
}

fn table_bytes(header: &[&str], records: impl Iterator<Item = Vec<String>>, format: ReportFormat) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(Vec::new());
    let wrap = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(header).map_err(wrap)?;
    for r in records {
        w.write_record(&r).map_err(wrap)?;
    }
    w.into_inner()
        .map_err(|e| Error::Report(e.to_string()))
}

pub fn rows_table(rows: &[ResultRow], format: ReportFormat) -> Result<Vec<u8>> {
    table_bytes(&ROW_HEADER, rows.iter().map(ResultRow::record), format)
}

pub fn plane_table(rows: &[PlaneRow], format: ReportFormat) -> Result<Vec<u8>> {
    table_bytes(&PLANE_HEADER, rows.iter().map(PlaneRow::record), format)
}

pub fn synth_table(rows: &[SynthRow], format: ReportFormat) -> Result<Vec<u8>> {
    table_bytes(&SYNTH_HEADER, rows.iter().map(SynthRow::record), format)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `<id>_rows.<ext>` and `<id>_summary.txt` into `dir`.
pub fn write_report(
    rows: &[ResultRow],
    summary: &Summary,
    format: ReportFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let table = dir.join(format!("{}_rows.{}", summary.experiment_id, format.extension()));
    let text = dir.join(format!("{}_summary.txt", summary.experiment_id));
    write_file(&table, &rows_table(rows, format)?)?;
    write_file(&text, summary.render().as_bytes())?;
    Ok(vec![table, text])
}

/// Writes `<id>_plane.<ext>` and `<id>_summary.txt` into `dir`.
pub fn write_plane_report(
    rows: &[PlaneRow],
    summary: &Summary,
    format: ReportFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let table = dir.join(format!("{}_plane.{}", summary.experiment_id, format.extension()));
    let text = dir.join(format!("{}_summary.txt", summary.experiment_id));
    write_file(&table, &plane_table(rows, format)?)?;
    write_file(&text, summary.render().as_bytes())?;
    Ok(vec![table, text])
}

/// Writes `<id>_synth.<ext>` into `dir`.
pub fn write_synth(rows: &[SynthRow], id: &str, format: ReportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let table = dir.join(format!("{id}_synth.{}", format.extension()));
    write_file(&table, &synth_table(rows, format)?)?;
    Ok(vec![table])
}
