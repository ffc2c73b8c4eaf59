use rayon::prelude::*;
use serde::Serialize;

use super::{ExperimentReport, Snapshot, Table, Verdict};
use crate::dynamics::{integrate, SolverConfig};
use crate::error::{Error, Result};
use crate::solutions::{hm_exact_state, HMFamilySpec};
use crate::spectral::make_grid;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceParams {
    pub grid_sizes: Vec<usize>,
    pub dt_list: Vec<f64>,
    pub n: u32,
    pub s: f64,
    pub gammas: Vec<f64>,
    pub tolerance: f64,
    /// Pairs whose finer error is below this are round-off dominated and
    /// excluded from the order estimate.
    pub order_floor: f64,
    pub solver: SolverConfig,
    pub snapshots: bool,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        Self {
            grid_sizes: vec![64],
            dt_list: vec![0.05, 0.025, 0.0125, 1e-3],
            n: 4,
            s: 3.0,
            gammas: vec![0.0, 0.1],
            tolerance: 1e-8,
            order_floor: 1e-11,
            solver: SolverConfig::default(),
            snapshots: false,
        }
    }
}

struct CaseResult {
    grid_n: usize,
    gamma: f64,
    dt: f64,
    steps: usize,
    error: f64,
    snapshot: Option<Snapshot>,
}

/// Integrates the traveling shear with fixed steps and compares with the
/// closed form at `t_end`.
pub fn run_convergence(params: &ConvergenceParams) -> Result<ExperimentReport> {
    if params.grid_sizes.is_empty() || params.dt_list.is_empty() || params.gammas.is_empty() {
        return Err(Error::InvalidArgument(
            "convergence needs grid sizes, time steps and gammas".into(),
        ));
    }
    let t_end = params.solver.t_end;
    let mut cases = Vec::new();
    for &grid_n in &params.grid_sizes {
        for &gamma in &params.gammas {
            for &dt in &params.dt_list {
                cases.push((grid_n, gamma, dt));
            }
        }
    }
    let results = cases
        .par_iter()
        .map(|&(grid_n, gamma, dt)| -> Result<CaseResult> {
            let grid = make_grid(grid_n)?;
            let spec = HMFamilySpec::new(params.n, params.s, 1.0, gamma)?;
            let cfg = SolverConfig {
                fixed_dt: Some(dt),
                diagnostic_stride: usize::MAX,
                ..params.solver.clone()
            };
            let out = integrate(&hm_exact_state(&spec, 0.0, &grid)?, &cfg, &[])?;
            let exact = hm_exact_state(&spec, t_end, &grid)?;
            let error = out
                .final_state
                .theta_hat
                .difference(&exact.theta_hat)?
                .energy_sum()
                .sqrt()
                / exact.theta_hat.energy_sum().sqrt();
            let snapshot = params
                .snapshots
                .then(|| Snapshot::of(format!("theta_N{grid_n}_gamma{gamma}_dt{dt}"), &out.final_state));
            Ok(CaseResult {
                grid_n,
                gamma,
                dt,
                steps: out.steps,
                error,
                snapshot,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new("convergence");
    let mut errors = Table::new("convergence", &["grid_n", "gamma", "dt", "steps", "rel_l2_error"]);
    for r in &results {
        errors.push(vec![
            r.grid_n.into(),
            r.gamma.into(),
            r.dt.into(),
            r.steps.into(),
            r.error.into(),
        ]);
    }

    let mut order = Table::new(
        "temporal_order",
        &[
            "grid_n",
            "gamma",
            "dt_coarse",
            "dt_fine",
            "observed_order",
            "halving_ratio",
            "included",
        ],
    );
    let dt_min = params.dt_list.iter().copied().fold(f64::INFINITY, f64::min);
    let mut worst_fine = 0.0f64;
    let mut ratios = Vec::new();
    for group in results.chunks(params.dt_list.len()) {
        for r in group.iter().filter(|r| r.dt == dt_min) {
            worst_fine = worst_fine.max(r.error);
        }
        let mut sorted: Vec<&CaseResult> = group.iter().collect();
        sorted.sort_by(|a, b| b.dt.total_cmp(&a.dt));
        for pair in sorted.windows(2) {
            let (coarse, fine) = (pair[0], pair[1]);
            let p = (coarse.error / fine.error).ln() / (coarse.dt / fine.dt).ln();
            let halving = 2f64.powf(p);
            let included = fine.error >= params.order_floor;
            if included {
                ratios.push(halving);
            }
            order.push(vec![
                coarse.grid_n.into(),
                coarse.gamma.into(),
                coarse.dt.into(),
                fine.dt.into(),
                p.into(),
                halving.into(),
                (included as i64).into(),
            ]);
        }
    }

    report.verdicts.push(Verdict::new(
        "accuracy",
        worst_fine <= params.tolerance,
        format!(
            "largest relative L2 error at dt = {dt_min:e}: {worst_fine:.3e} (tolerance {:.1e})",
            params.tolerance
        ),
    ));
    let in_range = !ratios.is_empty() && ratios.iter().all(|r| (12.0..=20.0).contains(r));
    report.verdicts.push(Verdict::new(
        "temporal_order",
        in_range,
        format!(
            "{} resolved dt-halving ratios, range [{:.3}, {:.3}], required within [12, 20]",
            ratios.len(),
            ratios.iter().copied().fold(f64::INFINITY, f64::min),
            ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        ),
    ));
    report.notes.push(format!(
        "pairs with finer error below {:.0e} are dominated by round-off and excluded from the order estimate",
        params.order_floor
    ));
    report.tables.push(errors);
    report.tables.push(order);
    report.snapshots = results.into_iter().filter_map(|r| r.snapshot).collect();
    Ok(report)
}
