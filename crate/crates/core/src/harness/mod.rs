//! Reproducible experiments over the devices in [`crate::network`], with
//! their configuration format and CSV/SVG emitters.

pub mod config;
pub mod csv;
mod experiments;
pub mod svg;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

pub use config::{DeviceKind, ExperimentConfig, SignalKind};
pub use experiments::{
    build_device, build_signal, run_dodecanary, run_noise_pulses, run_rate_sweep, run_transfer,
    run_verify, Divergence, VerifyOptions, VerifyOutcome,
};

use crate::error::{Error, Result};
use csv::Table;

/// Process exit codes used by the `proteresis` binary.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    pub const DIVERGENCE: i32 = 3;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informative checks are reported but never fail a run.
    pub informative: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: String,
    pub metrics: Vec<(String, f64)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_owned(),
            metrics: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn add_metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    pub(crate) fn add_check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            informative: false,
            detail: detail.into(),
        });
    }

    pub(crate) fn add_informative(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            informative: true,
            detail: detail.into(),
        });
    }

    /// True when every non-informative check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informative)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "experiment: {}", self.experiment)?;
        for (k, v) in &self.metrics {
            writeln!(f, "  {k} = {}", csv::format_real(*v))?;
        }
        for c in &self.checks {
            let status = match (c.passed, c.informative) {
                (true, _) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "FAIL (informative)",
            };
            writeln!(f, "  [{status}] {}: {}", c.name, c.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Which table columns to chart, if a chart is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x: String,
    pub series: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub report: RunReport,
    pub table: Table,
    pub chart: Option<ChartSpec>,
}

impl ExperimentOutput {
    /// The CSV text that [`write_outputs`] would emit.
    pub fn render_csv(&self, columns: Option<&[String]>) -> Result<String> {
        Ok(match columns {
            Some(cols) => self.table.select(cols)?.render(),
            None => self.table.render(),
        })
    }

    pub fn render_svg(&self) -> Option<String> {
        let chart = self.chart.as_ref()?;
        let real = |name: &str| -> Option<Vec<f64>> {
            match self.table.column(name)? {
                csv::ColumnData::Real(v) => Some(v.clone()),
                csv::ColumnData::Int(v) => Some(v.iter().map(|&i| i as f64).collect()),
                csv::ColumnData::Text(_) => None,
            }
        };
        let x = real(&chart.x)?;
        let ys: Vec<(String, Vec<f64>)> = chart
            .series
            .iter()
            .filter_map(|n| real(n).map(|v| (n.clone(), v)))
            .collect();
        let series: Vec<svg::Series<'_>> = ys
            .iter()
            .map(|(n, v)| svg::Series {
                name: n,
                values: v,
            })
            .collect();
        Some(svg::render_chart(&chart.title, &chart.x, &x, &series))
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    fs::write(path, contents).map_err(io_err)
}

/// Writes the CSV (and SVG, if configured) named in the output section.
pub fn write_outputs(config: &ExperimentConfig, output: &ExperimentOutput) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(path) = &config.output.csv {
        write_text(path, &output.render_csv(config.output.columns.as_deref())?)?;
        written.push(path.clone());
    }
    if let Some(path) = &config.output.svg {
        let svg = output
            .render_svg()
            .ok_or_else(|| Error::config("this experiment has no chart to render"))?;
        write_text(path, &svg)?;
        written.push(path.clone());
    }
    Ok(written)
}

/// One-line summary used in the binary's output.
pub fn summary_line(report: &RunReport) -> String {
    let mut s = String::new();
    let failed = report.checks.iter().filter(|c| !c.passed && !c.informative).count();
    let _ = write!(
        s,
        "{}: {} checks, {} failed",
        report.experiment,
        report.checks.len(),
        failed
    );
    s
}
