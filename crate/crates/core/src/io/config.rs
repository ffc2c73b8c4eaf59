//! Run configuration: a sectioned TOML document (JSON accepted as well).
//!
//! ```toml
//! experiment = "nonuniform"
//! seed = 1
//! output_dir = "out/nonuniform"
//!
//! [grid]
//! n = 256
//!
//! [solver]
//! cfl = 0.4
//!
//! [nonuniform]
//! n_list = [8, 16, 32, 64]
//! ```
//!
//! Unknown keys are rejected, and only the section named by `experiment` may
//! appear. Errors carry the dotted path of the offending key.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::SolverConfig;
use crate::error::{Error, Result};
use crate::solutions::{bump_blob_pair, BlobSpec};
use crate::spectral::{Grid2D, LogMultiplier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Convergence,
    Continuity,
    GammaComparison,
    Nonuniform,
    Support,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Convergence => "convergence",
            Self::Continuity => "continuity",
            Self::GammaComparison => "gamma_comparison",
            Self::Nonuniform => "nonuniform",
            Self::Support => "support",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub snapshots: SnapshotSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<ContinuitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_comparison: Option<GammaComparisonSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonuniform: Option<NonuniformSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportSection>,
}

fn default_seed() -> u64 {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 128 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub cfl: f64,
    pub dt_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
    /// Defaults to 1, or to the last probe for `nonuniform`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub dealias_enabled: bool,
    pub diagnostic_stride: usize,
    pub p_list: Vec<f64>,
    pub s_list: Vec<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            cfl: d.cfl,
            dt_max: d.dt_max,
            fixed_dt: None,
            t_end: None,
            dealias_enabled: d.dealias_enabled,
            diagnostic_stride: d.diagnostic_stride,
            p_list: d.p_list,
            s_list: d.s_list,
        }
    }
}

impl SolverSection {
    pub fn to_solver(&self, t_end: f64) -> SolverConfig {
        SolverConfig {
            cfl: self.cfl,
            dt_max: self.dt_max,
            fixed_dt: self.fixed_dt,
            t_end,
            dealias_enabled: self.dealias_enabled,
            diagnostic_stride: self.diagnostic_stride,
            p_list: self.p_list.clone(),
            s_list: self.s_list.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnapshotSection {
    /// Write `θ` at every comparison time of every case.
    pub enabled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceSection {
    /// Defaults to `[grid.n]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_sizes: Option<Vec<usize>>,
    pub dt_list: Vec<f64>,
    pub n: u32,
    pub s: f64,
    pub gamma_list: Vec<f64>,
    pub tolerance: f64,
    pub order_floor: f64,
}

impl Default for ConvergenceSection {
    fn default() -> Self {
        Self {
            grid_sizes: None,
            dt_list: vec![0.05, 0.025, 0.0125, 1e-3],
            n: 4,
            s: 3.0,
            gamma_list: vec![0.0, 0.1],
            tolerance: 1e-8,
            order_floor: 1e-11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuitySection {
    pub deltas: Vec<f64>,
    pub s: f64,
    pub gamma: f64,
    pub kmax: f64,
    pub decay: f64,
    pub amplitude: f64,
    pub records: usize,
}

impl Default for ContinuitySection {
    fn default() -> Self {
        Self {
            deltas: vec![1e-2, 1e-3, 1e-4],
            s: 2.5,
            gamma: 0.1,
            kmax: 8.0,
            decay: 3.0,
            amplitude: 1.0,
            records: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GammaComparisonSection {
    pub gamma_list: Vec<f64>,
    pub s: f64,
    pub kmax: f64,
    pub decay: f64,
    pub amplitude: f64,
    pub records: usize,
    pub fit_window: f64,
    /// Envelope constant; the frozen regression value when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
}

impl Default for GammaComparisonSection {
    fn default() -> Self {
        Self {
            gamma_list: vec![0.02, 0.01, 0.005],
            s: 2.5,
            kmax: 8.0,
            decay: 3.0,
            amplitude: 1.0,
            records: 50,
            fit_window: 0.1,
            c0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonuniformSection {
    pub n_list: Vec<u32>,
    pub s: f64,
    pub gamma: f64,
    pub probes: Vec<f64>,
}

impl Default for NonuniformSection {
    fn default() -> Self {
        Self {
            // resolved on the default 128² grid; the full sweep sets 64 on 256²
            n_list: vec![8, 16, 32],
            s: 2.5,
            gamma: 0.01,
            probes: vec![PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupportSection {
    pub blobs: [BlobSpec; 2],
    pub gamma: f64,
    pub s: f64,
    pub threshold: f64,
    pub records: usize,
    /// Bound on `sup_t ‖θ‖_{H^s}/‖θ₀‖_{H^s}`; the frozen regression value when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hs_ratio_bound: Option<f64>,
}

impl Default for SupportSection {
    fn default() -> Self {
        let d = crate::experiments::SupportParams::default();
        Self {
            blobs: d.blobs,
            gamma: d.gamma,
            s: d.s,
            threshold: d.threshold,
            records: d.records,
            hs_ratio_bound: None,
        }
    }
}

/// Parses and validates a configuration. Text starting with `{` is read as JSON.
///
/// The section of the selected experiment is filled with defaults when absent.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config: RunConfig = if text.trim_start().starts_with('{') {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::config(path_of(&e), e.inner().to_string()))?
    } else {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<document>", e.to_string().trim()))?;
        serde_path_to_error::deserialize(de)
            .map_err(|e| Error::config(path_of(&e), e.inner().to_string().trim().to_string()))?
    };
    config.fill_section();
    config.validate()?;
    Ok(config)
}

fn path_of<E>(e: &serde_path_to_error::Error<E>) -> String {
    let p = e.path().to_string();
    if p == "." {
        "<root>".into()
    } else {
        p
    }
}

/// TOML rendering; `parse_config(&serialize_config(c)?)` reproduces `c`.
pub fn serialize_config(config: &RunConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::config("<document>", e.to_string()))
}

fn check(ok: bool, path: &str, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(path, msg()))
    }
}

fn check_gamma(path: &str, gamma: f64) -> Result<()> {
    LogMultiplier::new(gamma)
        .map(|_| ())
        .map_err(|_| Error::config(path, "gamma must be ≥ 0"))
}

fn check_positive(path: &str, v: f64) -> Result<()> {
    check(v > 0.0 && v.is_finite(), path, || {
        format!("must be a finite number > 0, got {v}")
    })
}

impl RunConfig {
    /// Minimal configuration for `kind` with every default applied.
    pub fn with_defaults(kind: ExperimentKind) -> Self {
        let mut c = Self {
            experiment: kind,
            seed: default_seed(),
            output_dir: default_output_dir(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            snapshots: SnapshotSection::default(),
            convergence: None,
            continuity: None,
            gamma_comparison: None,
            nonuniform: None,
            support: None,
        };
        c.fill_section();
        c
    }

    fn fill_section(&mut self) {
        match self.experiment {
            ExperimentKind::Convergence => {
                self.convergence.get_or_insert_with(Default::default);
            }
            ExperimentKind::Continuity => {
                self.continuity.get_or_insert_with(Default::default);
            }
            ExperimentKind::GammaComparison => {
                self.gamma_comparison.get_or_insert_with(Default::default);
            }
            ExperimentKind::Nonuniform => {
                self.nonuniform.get_or_insert_with(Default::default);
            }
            ExperimentKind::Support => {
                self.support.get_or_insert_with(Default::default);
            }
        }
    }

    /// Horizon of the run: `solver.t_end`, else the experiment's natural default.
    pub fn t_end(&self) -> f64 {
        self.solver.t_end.unwrap_or_else(|| match &self.nonuniform {
            Some(nu) if self.experiment == ExperimentKind::Nonuniform => {
                nu.probes.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE)
            }
            _ => 1.0,
        })
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.solver.to_solver(self.t_end())
    }

    pub fn validate(&self) -> Result<()> {
        let present = [
            ("convergence", self.convergence.is_some(), ExperimentKind::Convergence),
            ("continuity", self.continuity.is_some(), ExperimentKind::Continuity),
            (
                "gamma_comparison",
                self.gamma_comparison.is_some(),
                ExperimentKind::GammaComparison,
            ),
            ("nonuniform", self.nonuniform.is_some(), ExperimentKind::Nonuniform),
            ("support", self.support.is_some(), ExperimentKind::Support),
        ];
        for (name, is_set, kind) in present {
            check(!is_set || kind == self.experiment, name, || {
                format!("section does not apply to experiment `{}`", self.experiment.name())
            })?;
        }
        let grid = Grid2D::new(self.grid.n).map_err(|e| Error::config("grid.n", e.to_string()))?;
        self.solver_config().validate()?;
        if let Some(t) = self.solver.t_end {
            check_positive("solver.t_end", t)?;
        }
        let cutoff = grid.dealias_cutoff();

        match self.experiment {
            ExperimentKind::Convergence => {
                let c = self.convergence.as_ref().expect("section filled");
                let sizes = c.grid_sizes.clone().unwrap_or_else(|| vec![self.grid.n]);
                check(!sizes.is_empty(), "convergence.grid_sizes", || {
                    "must not be empty".into()
                })?;
                for n in &sizes {
                    let g = Grid2D::new(*n).map_err(|e| Error::config("convergence.grid_sizes", e.to_string()))?;
                    check(c.n as i64 <= g.dealias_cutoff(), "convergence.n", || {
                        format!("shear frequency {} is not resolved on a {n}² grid", c.n)
                    })?;
                }
                check(c.n >= 1, "convergence.n", || "must be ≥ 1".into())?;
                check(c.s > 2.0, "convergence.s", || format!("must exceed 2, got {}", c.s))?;
                check(!c.dt_list.is_empty(), "convergence.dt_list", || {
                    "must not be empty".into()
                })?;
                for dt in &c.dt_list {
                    check_positive("convergence.dt_list", *dt)?;
                }
                check(!c.gamma_list.is_empty(), "convergence.gamma_list", || {
                    "must not be empty".into()
                })?;
                for g in &c.gamma_list {
                    check_gamma("convergence.gamma_list", *g)?;
                }
                check_positive("convergence.tolerance", c.tolerance)?;
                check_positive("convergence.order_floor", c.order_floor)?;
            }
            ExperimentKind::Continuity => {
                let c = self.continuity.as_ref().expect("section filled");
                check(!c.deltas.is_empty(), "continuity.deltas", || "must not be empty".into())?;
                for d in &c.deltas {
                    check(*d >= 0.0 && d.is_finite(), "continuity.deltas", || {
                        format!("must be ≥ 0, got {d}")
                    })?;
                }
                check(c.s > 2.0, "continuity.s", || format!("must exceed 2, got {}", c.s))?;
                check_gamma("continuity.gamma", c.gamma)?;
                check_band("continuity", c.kmax, c.decay, c.amplitude, cutoff)?;
                check(c.records >= 1, "continuity.records", || "must be ≥ 1".into())?;
            }
            ExperimentKind::GammaComparison => {
                let c = self.gamma_comparison.as_ref().expect("section filled");
                check(!c.gamma_list.is_empty(), "gamma_comparison.gamma_list", || {
                    "must not be empty".into()
                })?;
                for g in &c.gamma_list {
                    check_gamma("gamma_comparison.gamma_list", *g)?;
                }
                check(c.s > 2.0, "gamma_comparison.s", || {
                    format!("must exceed 2, got {}", c.s)
                })?;
                check_band("gamma_comparison", c.kmax, c.decay, c.amplitude, cutoff)?;
                check(c.records >= 1, "gamma_comparison.records", || "must be ≥ 1".into())?;
                check_positive("gamma_comparison.fit_window", c.fit_window)?;
                if let Some(c0) = c.c0 {
                    check_positive("gamma_comparison.c0", c0)?;
                }
            }
            ExperimentKind::Nonuniform => {
                let c = self.nonuniform.as_ref().expect("section filled");
                check(!c.n_list.is_empty(), "nonuniform.n_list", || "must not be empty".into())?;
                for n in &c.n_list {
                    check(*n >= 1 && *n as i64 <= cutoff, "nonuniform.n_list", || {
                        format!(
                            "shear frequency {n} is not resolved on a {}² grid (cutoff {cutoff})",
                            self.grid.n
                        )
                    })?;
                }
                check(c.s > 2.0, "nonuniform.s", || format!("must exceed 2, got {}", c.s))?;
                check_gamma("nonuniform.gamma", c.gamma)?;
                check(!c.probes.is_empty(), "nonuniform.probes", || "must not be empty".into())?;
                let t_end = self.t_end();
                for t in &c.probes {
                    check(*t > 0.0 && *t <= t_end, "nonuniform.probes", || {
                        format!("probe {t} must lie in (0, t_end = {t_end}]")
                    })?;
                }
            }
            ExperimentKind::Support => {
                let c = self.support.as_ref().expect("section filled");
                for (i, b) in c.blobs.iter().enumerate() {
                    BlobSpec::new(b.center, b.radius, b.amplitude)
                        .map_err(|e| Error::config(format!("support.blobs[{i}]"), e.to_string()))?;
                }
                bump_blob_pair(&c.blobs[0], &c.blobs[1], &std::sync::Arc::new(grid))
                    .map_err(|e| Error::config("support.blobs", e.to_string()))?;
                check_gamma("support.gamma", c.gamma)?;
                check(c.s > 0.0, "support.s", || format!("must be > 0, got {}", c.s))?;
                check(c.threshold > 0.0 && c.threshold < 1.0, "support.threshold", || {
                    format!("must lie in (0, 1), got {}", c.threshold)
                })?;
                check(c.records >= 1, "support.records", || "must be ≥ 1".into())?;
                if let Some(b) = c.hs_ratio_bound {
                    check_positive("support.hs_ratio_bound", b)?;
                }
            }
        }
        Ok(())
    }
}

fn check_band(section: &str, kmax: f64, decay: f64, amplitude: f64, cutoff: i64) -> Result<()> {
    check(kmax >= 1.0 && kmax <= cutoff as f64, &format!("{section}.kmax"), || {
        format!("must lie in [1, {cutoff}] (dealias cutoff), got {kmax}")
    })?;
    check(decay.is_finite(), &format!("{section}.decay"), || {
        format!("must be finite, got {decay}")
    })?;
    check_positive(&format!("{section}.amplitude"), amplitude)
}
