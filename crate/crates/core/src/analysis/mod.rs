//! Sobolev and Lebesgue norms, Littlewood–Paley projections, inequality
//! reports and support diagnostics.

mod inequalities;
mod littlewood_paley;
mod norms;
mod support;

pub use inequalities::{
    bernstein_report, kato_ponce_report, log_interp_report, multiplier_distance, velocity_gradient, Bound,
    InequalityReport, RATIO_FLOOR,
};
pub use littlewood_paley::{bump, lp_projection, BandKind, LPBand};
pub use norms::{lp_norm, sobolev_norm, sup_norm_refined, NormSpec};
pub use support::{set_distance, support_summary, torus_distance, Component, SupportSummary};

pub(crate) use norms::{lp_norm_of, sup_norm_refined_with};
pub(crate) use support::boundary_cells;

use crate::spectral::Grid2D;

/// Largest `|k|` kept by the grid's dealias mask: the corner `√2 · ⌊n/3⌋`.
pub fn resolved_kmax(grid: &Grid2D) -> f64 {
    std::f64::consts::SQRT_2 * grid.dealias_cutoff() as f64
}
