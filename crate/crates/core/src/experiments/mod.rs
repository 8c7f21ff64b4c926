//! Run configurations, parameter sweeps and tabular output shared by the
//! command-line front end.

mod figures;
mod sweeps;
mod tasks;

pub use figures::run_figure;
pub use sweeps::{run_discord, run_metric, run_state};
pub use tasks::{
    run_copies, run_threshold, run_validate, PointResult, PointStatus, ValidateOptions, ValidationReport,
    SANDWICH_SLACK, THRESHOLD_MAX, VALIDATE_T, VALIDATE_TOL,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discord::Metric;
use crate::error::{Error, Result};
use crate::gaussian::{Family, StateParams};

/// Significant digits of CSV values.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    State,
    Metric,
    Discord,
    Figure,
    Threshold,
    Copies,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

/// One swept parameter, `steps` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<GridSpec> {
        if steps < 2 {
            return Err(Error::Usage(format!("grid '{name}' needs at least 2 steps, got {steps}")));
        }
        if !(min < max) {
            return Err(Error::Usage(format!("grid '{name}' needs min < max, got {min} and {max}")));
        }
        Ok(GridSpec {
            name: name.to_string(),
            min,
            max,
            steps,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 })
            .collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;
    /// Parses `name:min:max:steps`.
    fn from_str(s: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Usage(format!("grid '{s}' must look like name:min:max:steps"));
        if parts.len() != 4 || parts[0].is_empty() {
            return Err(bad());
        }
        let min: f64 = parts[1].parse().map_err(|_| bad())?;
        let max: f64 = parts[2].parse().map_err(|_| bad())?;
        let steps: usize = parts[3].parse().map_err(|_| bad())?;
        GridSpec::new(parts[0], min, max, steps)
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub figure_id: Option<u8>,
    pub family: Option<Family>,
    pub metric: Option<Metric>,
    pub grids: Vec<GridSpec>,
    /// Named scalar parameters (`r`, `nth1`, `nth2`, `ns`, `alpha`,
    /// `rprime`, `phi`, `copies`, `target`, ...).
    pub fixed: BTreeMap<String, f64>,
    pub output: Option<String>,
    pub format: Format,
    pub cutoff: Option<usize>,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> RunConfig {
        RunConfig {
            subcommand,
            figure_id: None,
            family: None,
            metric: None,
            grids: Vec::new(),
            fixed: BTreeMap::new(),
            output: None,
            format: Format::Csv,
            cutoff: None,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> RunConfig {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn with_grid(mut self, grid: GridSpec) -> RunConfig {
        self.grids.retain(|g| g.name != grid.name);
        self.grids.push(grid);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.fixed.get(name).copied()
    }

    pub fn get_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }

    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name)
            .ok_or_else(|| Error::Usage(format!("missing parameter --{name}")))
    }

    /// The grid named `name`, or the given default.
    pub fn grid_or(&self, name: &str, min: f64, max: f64, steps: usize) -> GridSpec {
        self.grids
            .iter()
            .find(|g| g.name == name)
            .cloned()
            .unwrap_or(GridSpec {
                name: name.to_string(),
                min,
                max,
                steps,
            })
    }

    /// Rejects grids over names the subcommand does not sweep.
    pub(crate) fn check_grid_names(&self, allowed: &[&str]) -> Result<()> {
        for g in &self.grids {
            if !allowed.contains(&g.name.as_str()) {
                return Err(Error::Usage(format!(
                    "cannot sweep '{}' here (expected one of: {})",
                    g.name,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// State parameters from the fixed values, with `values` overriding.
    pub(crate) fn params(&self, values: &BTreeMap<String, f64>) -> StateParams {
        let get = |k: &str| values.get(k).copied().or_else(|| self.get(k));
        let mut p = StateParams::new();
        if let Some(ns) = get("ns") {
            p = p.with_ns(ns);
        }
        if let Some(r) = get("r") {
            p = p.with_r(r);
        }
        let nth = get("nth");
        let n1 = get("nth1").or(nth).unwrap_or(0.0);
        let n2 = get("nth2").or(nth).unwrap_or(0.0);
        p.with_thermal(n1, n2)
            .with_alpha(Complex64::new(get("alpha").unwrap_or(0.0), get("alpha_im").unwrap_or(0.0)))
            .with_r_prime(get("rprime").unwrap_or(0.0))
    }
}

/// Parameter names accepted by [`RunConfig::params`].
pub(crate) const STATE_PARAMS: [&str; 8] = ["r", "ns", "nth", "nth1", "nth2", "alpha", "alpha_im", "rprime"];

/// Cartesian product of the configured grids, first grid outermost.
pub(crate) fn grid_points(grids: &[GridSpec]) -> Vec<BTreeMap<String, f64>> {
    let mut points = vec![BTreeMap::new()];
    for g in grids {
        let vals = g.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.insert(g.name.clone(), v);
                    q
                })
            })
            .collect();
    }
    points
}

/// A named-column numeric table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `#` comment lines.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        let cfg = serde_json::to_string(config).unwrap_or_default();
        let _ = writeln!(out, "# qreading {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# config: {cfg}");
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v, CSV_DIGITS)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let doc = serde_json::json!({
            "config": config,
            "columns": self.columns,
            "rows": self.rows,
            "notes": self.notes,
        });
        serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n"
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Csv => self.to_csv(config),
            Format::Json => self.to_json(config),
        }
    }
}

/// Formats `v` with `digits` significant digits, in plain decimal notation
/// for moderate exponents and scientific notation otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        sci
    }
}
