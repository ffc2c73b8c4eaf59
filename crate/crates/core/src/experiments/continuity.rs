use rayon::prelude::*;
use serde::Serialize;

use super::{uniform_probes, ExperimentReport, Snapshot, Table, Verdict};
use crate::analysis::{sobolev_norm, NormSpec};
use crate::dynamics::{cfl_dt, integrate, SolverConfig};
use crate::error::{Error, Result};
use crate::solutions::random_smooth_field;
use crate::spectral::{make_grid, LogMultiplier};
use crate::velocity::FlowState;

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityParams {
    pub grid_n: usize,
    pub seed: u64,
    /// Band and spectral slope of the base data and of the perturbation.
    pub kmax: f64,
    pub decay: f64,
    /// `L²` norm of the base data and of the perturbation direction.
    pub amplitude: f64,
    pub deltas: Vec<f64>,
    pub s: f64,
    pub gamma: f64,
    /// Number of uniformly spaced comparison times after `t = 0`.
    pub records: usize,
    pub solver: SolverConfig,
    pub snapshots: bool,
}

impl Default for ContinuityParams {
    fn default() -> Self {
        Self {
            grid_n: 64,
            seed: 1,
            kmax: 8.0,
            decay: 3.0,
            amplitude: 1.0,
            deltas: vec![1e-2, 1e-3, 1e-4],
            s: 2.5,
            gamma: 0.1,
            records: 20,
            solver: SolverConfig::default(),
            snapshots: false,
        }
    }
}

/// Integrates `θ₀` and `θ₀ + δη` on a common fixed time grid and records
/// `sup_t ‖θ_δ(t) − θ(t)‖_{H^s}` for each `δ`.
pub fn run_continuity(params: &ContinuityParams) -> Result<ExperimentReport> {
    if params.deltas.iter().any(|d| !(*d >= 0.0 && d.is_finite())) || params.deltas.is_empty() {
        return Err(Error::InvalidArgument("deltas must be finite and ≥ 0".into()));
    }
    if params.records == 0 {
        return Err(Error::InvalidArgument("records must be ≥ 1".into()));
    }
    let grid = make_grid(params.grid_n)?;
    let m = LogMultiplier::new(params.gamma)?;
    let base = random_smooth_field(params.seed, &grid, params.kmax, params.decay, params.amplitude)?;
    let eta = random_smooth_field(
        params.seed.wrapping_add(1),
        &grid,
        params.kmax,
        params.decay,
        params.amplitude,
    )?;
    let base_state = FlowState::new(base.clone(), [0.0, 0.0], 0.0, m)?;
    // one step size for every run, so differences carry no step-selection noise
    let cfg = SolverConfig {
        fixed_dt: Some(cfl_dt(&base_state, &params.solver)),
        ..params.solver.clone()
    };
    let probes = uniform_probes(cfg.t_end, params.records);

    let mut runs: Vec<f64> = vec![0.0];
    runs.extend(params.deltas.iter().copied());
    let states = runs
        .par_iter()
        .map(|&delta| -> Result<Vec<FlowState>> {
            let mut theta = base.clone();
            theta.add_scaled(delta, &eta)?;
            let state = FlowState::new(theta, [0.0, 0.0], 0.0, m)?;
            Ok(integrate(&state, &cfg, &probes)?.snapshots)
        })
        .collect::<Result<Vec<_>>>()?;

    let hs = NormSpec::inhomogeneous(params.s);
    let mut series = Table::new("continuity", &["delta", "t", "hs_difference"]);
    let mut summary = Table::new("continuity_summary", &["delta", "sup_hs_difference", "sup_over_delta"]);
    let mut sups = Vec::new();
    for (delta, run) in runs.iter().zip(&states).skip(1) {
        let mut sup = 0.0f64;
        for (a, b) in run.iter().zip(&states[0]) {
            let d = sobolev_norm(&a.theta_hat.difference(&b.theta_hat)?, hs);
            sup = sup.max(d);
            series.push(vec![(*delta).into(), a.time.into(), d.into()]);
        }
        let lipschitz = if *delta > 0.0 { sup / delta } else { 0.0 };
        summary.push(vec![(*delta).into(), sup.into(), lipschitz.into()]);
        sups.push((*delta, sup));
    }

    let mut report = ExperimentReport::new("continuity");
    sups.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = sups.windows(2).all(|w| w[1].1 <= w[0].1);
    report.verdicts.push(Verdict::new(
        "monotone_in_delta",
        monotone,
        "sup_t H^s difference is non-increasing as delta decreases",
    ));

    let mut ratios = Table::new("continuity_ratios", &["delta_coarse", "delta_fine", "decade_ratio"]);
    let positive: Vec<(f64, f64)> = sups.iter().copied().filter(|(d, _)| *d > 0.0).collect();
    let mut decade = Vec::new();
    for w in positive.windows(2) {
        let r = (w[0].1 / w[1].1).powf(1.0 / (w[0].0 / w[1].0).log10());
        decade.push(r);
        ratios.push(vec![w[0].0.into(), w[1].0.into(), r.into()]);
    }
    report.verdicts.push(Verdict::new(
        "decade_ratio",
        !decade.is_empty() && decade.iter().all(|r| (5.0..=20.0).contains(r)),
        format!("per-decade reduction factors {decade:.3?}, required within [5, 20]"),
    ));
    if let Some(zero) = sups.iter().find(|(d, _)| *d == 0.0) {
        report.verdicts.push(Verdict::new(
            "zero_delta",
            zero.1 == 0.0,
            format!("delta = 0 difference {:.3e}", zero.1),
        ));
    }
    report.notes.push(format!(
        "fixed step {:.6e} taken from the base data's CFL limit; {} comparison times",
        cfg.fixed_dt.unwrap_or_default(),
        probes.len()
    ));
    report.tables.extend([series, summary, ratios]);
    if params.snapshots {
        for (delta, run) in runs.iter().zip(&states) {
            for st in run {
                report
                    .snapshots
                    .push(Snapshot::of(format!("theta_delta{delta:e}_t{:.6}", st.time), st));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_delta_gives_zero_difference() {
        let params = ContinuityParams {
            grid_n: 32,
            deltas: vec![1e-2, 0.0],
            records: 4,
            solver: SolverConfig {
                t_end: 0.2,
                ..SolverConfig::default()
            },
            ..ContinuityParams::default()
        };
        let report = run_continuity(&params).unwrap();
        assert!(report.verdict("zero_delta").unwrap().pass);
        assert!(report.verdict("monotone_in_delta").unwrap().pass);
        assert!(report.all_finite());
    }
}
