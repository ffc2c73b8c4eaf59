//! Scenario runners: solver convergence, continuous dependence, Euler versus
//! regularized comparison, non-uniform dependence and support separation.
//!
//! Cases inside a sweep run in parallel on the ambient rayon pool; each case is
//! sequential and results are collected in input order, so reports do not
//! depend on the thread count.

mod comparison;
mod continuity;
mod convergence;
mod nonuniform;
mod support;

use std::time::Duration;

use serde::Serialize;

use crate::spectral::{to_physical_unchecked, RealField};
use crate::velocity::FlowState;

pub use comparison::{comparison_bound_eval, fitted_c0, run_gamma_comparison, GammaComparisonParams};
pub use continuity::{run_continuity, ContinuityParams};
pub use convergence::{run_convergence, ConvergenceParams};
pub use nonuniform::{run_nonuniform, NonuniformParams};
pub use support::{run_support, SupportParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(v) => v as f64,
            Cell::Float(v) => v,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_f64().is_finite()
    }

    /// CSV rendering; floats use 17 significant digits so they round-trip.
    pub fn render(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// File stem of the CSV written for this table.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// A vorticity field captured during a run, written out when snapshots are enabled.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub name: String,
    pub time: f64,
    pub gamma: f64,
    pub field: RealField,
}

impl Snapshot {
    pub(crate) fn of(name: String, state: &FlowState) -> Self {
        Self {
            name,
            time: state.time,
            gamma: state.gamma(),
            field: to_physical_unchecked(&state.theta_hat),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    /// Echo of the configuration that produced the report.
    pub config: serde_json::Value,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    /// Kept out of `report.json` so reruns are byte-identical; goes to the manifest.
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            version: VERSION.to_string(),
            config: serde_json::Value::Null,
            tables: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            wall_time: Duration::ZERO,
            snapshots: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn all_finite(&self) -> bool {
        self.tables.iter().all(|t| t.rows.iter().flatten().all(Cell::is_finite))
    }
}

/// `k · t_end / count` for `k = 0..=count`, with the last entry exactly `t_end`.
pub(crate) fn uniform_probes(t_end: f64, count: usize) -> Vec<f64> {
    let mut probes: Vec<f64> = (0..=count).map(|k| t_end * k as f64 / count as f64).collect();
    if let Some(last) = probes.last_mut() {
        *last = t_end;
    }
    probes
}
