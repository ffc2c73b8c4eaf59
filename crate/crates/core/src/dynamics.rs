//! Pseudospectral right-hand side, CFL-controlled RK4 and conservation diagnostics.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{lp_norm_of, sobolev_norm, sup_norm_refined_with, NormSpec};
use crate::error::{Error, Result};
use crate::spectral::{Grid2D, LogMultiplier, SpectralField};
use crate::velocity::{BiotSavart, FlowState};

const SPEED_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub cfl: f64,
    pub dt_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
    pub t_end: f64,
    pub dealias_enabled: bool,
    pub diagnostic_stride: usize,
    /// Lebesgue exponents recorded in diagnostics.
    pub p_list: Vec<f64>,
    /// Sobolev indices recorded in diagnostics.
    pub s_list: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            dt_max: 0.05,
            fixed_dt: None,
            t_end: 1.0,
            dealias_enabled: true,
            diagnostic_stride: 1,
            p_list: vec![4.0],
            s_list: vec![2.5],
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::config(format!("solver.{field}"), msg));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl", format!("must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return bad("dt_max", format!("must be > 0, got {}", self.dt_max));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("fixed_dt", format!("must be > 0, got {dt}"));
            }
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("must be > 0, got {}", self.t_end));
        }
        if self.diagnostic_stride < 1 {
            return bad("diagnostic_stride", "must be ≥ 1".into());
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p >= 1.0)) {
            return bad("p_list", format!("exponents must be ≥ 1, got {p}"));
        }
        if let Some(s) = self.s_list.iter().find(|s| !s.is_finite()) {
            return bad("s_list", format!("indices must be finite, got {s}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub l2_theta: f64,
    /// Supremum of the trigonometric interpolant (not the sample maximum).
    pub linf_theta: f64,
    /// `(p, ‖θ‖_p)` pairs.
    pub lp_theta: Vec<(f64, f64)>,
    pub energy: f64,
    /// `(s, ‖θ‖_{H^s})` pairs.
    pub hs_theta: Vec<(f64, f64)>,
    pub max_speed: f64,
}

/// Reusable evaluator of `−(u·∇)θ` with preallocated buffers.
pub(crate) struct Tendency {
    grid: Arc<Grid2D>,
    biot: BiotSavart,
    dealias: bool,
    /// `k₁`, `k₂` with the Nyquist entries zeroed.
    k1: Vec<f64>,
    k2: Vec<f64>,
    theta_d: Vec<Complex64>,
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
    grad: Vec<Complex64>,
}

impl Tendency {
    pub(crate) fn new(grid: Arc<Grid2D>, m: &LogMultiplier, dealias: bool) -> Self {
        let nyq = grid.nyquist();
        let len = grid.len();
        let (mut k1, mut k2) = (vec![0.0; len], vec![0.0; len]);
        for idx in 0..len {
            let (a, b) = grid.mode(idx);
            k1[idx] = if a == -nyq { 0.0 } else { a as f64 };
            k2[idx] = if b == -nyq { 0.0 } else { b as f64 };
        }
        let zero = vec![Complex64::new(0.0, 0.0); len];
        Self {
            biot: BiotSavart::new(grid.clone(), m),
            grid,
            dealias,
            k1,
            k2,
            theta_d: zero.clone(),
            u1: zero.clone(),
            u2: zero.clone(),
            grad: zero,
        }
    }

    /// Physical velocity packed as `u₁ + i u₂` (one complex transform for both
    /// real components, since each spectrum is Hermitian).
    fn packed_velocity(&mut self, theta: &[Complex64], drift: [f64; 2]) -> &[Complex64] {
        self.load(theta);
        self.biot.apply(&self.theta_d, &mut self.u1, &mut self.u2);
        for idx in 0..self.u1.len() {
            let (a, b) = (self.u1[idx], self.u2[idx]);
            self.u1[idx] = Complex64::new(a.re - b.im, a.im + b.re);
        }
        self.u1[0] += Complex64::new(drift[0], drift[1]);
        self.grid.fft2(&mut self.u1, true);
        &self.u1
    }

    fn load(&mut self, theta: &[Complex64]) {
        let mask = self.grid.dealias_mask();
        for idx in 0..theta.len() {
            self.theta_d[idx] = if self.dealias && !mask[idx] {
                Complex64::new(0.0, 0.0)
            } else {
                theta[idx]
            };
        }
    }

    pub(crate) fn max_speed(&mut self, theta: &[Complex64], drift: [f64; 2]) -> f64 {
        self.packed_velocity(theta, drift)
            .iter()
            .fold(0.0, |m: f64, u| m.max(u.re.hypot(u.im)))
    }

    pub(crate) fn eval(&mut self, theta: &[Complex64], drift: [f64; 2], out: &mut [Complex64]) -> Result<()> {
        self.packed_velocity(theta, drift);
        // ∂₁θ + i ∂₂θ = i k₁ θ̂ − k₂ θ̂
        for idx in 0..theta.len() {
            let c = self.theta_d[idx];
            self.grad[idx] = Complex64::new(-c.im * self.k1[idx], c.re * self.k1[idx]) - c * self.k2[idx];
        }
        self.grid.fft2(&mut self.grad, true);
        for idx in 0..out.len() {
            let (u, g) = (self.u1[idx], self.grad[idx]);
            out[idx] = Complex64::new(u.re * g.re + u.im * g.im, 0.0);
        }
        self.grid.fft2(out, false);
        let norm = -1.0 / self.grid.len() as f64;
        let mask = self.grid.dealias_mask();
        for (c, keep) in out.iter_mut().zip(mask) {
            *c = if self.dealias && !keep {
                Complex64::new(0.0, 0.0)
            } else {
                *c * norm
            };
        }
        if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("advection tendency".into()));
        }
        Ok(())
    }
}

/// Spectrum of `−(u·∇)θ`, formed from dealiased spectra and dealiased again.
pub fn rhs_tendency(state: &FlowState) -> Result<SpectralField> {
    rhs_tendency_with(state, true)
}

/// [`rhs_tendency`] with the 2/3 rule switched on or off.
pub fn rhs_tendency_with(state: &FlowState, dealias: bool) -> Result<SpectralField> {
    let grid = state.grid().clone();
    let mut op = Tendency::new(grid.clone(), &state.multiplier, dealias);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    op.eval(state.theta_hat.coeffs(), state.drift, &mut out)?;
    SpectralField::new(grid, out)
}

/// `min(dt_max, cfl·Δx / max(‖u‖_∞, 1e−12))`, or `fixed_dt` when set.
pub fn cfl_dt(state: &FlowState, config: &SolverConfig) -> f64 {
    if let Some(dt) = config.fixed_dt {
        return dt;
    }
    let mut op = Tendency::new(state.grid().clone(), &state.multiplier, config.dealias_enabled);
    dt_from_speed(
        op.max_speed(state.theta_hat.coeffs(), state.drift),
        state.grid(),
        config,
    )
}

fn dt_from_speed(speed: f64, grid: &Grid2D, config: &SolverConfig) -> f64 {
    config.dt_max.min(config.cfl * grid.dx() / speed.max(SPEED_FLOOR))
}

/// Classical RK4 stepper with reusable stage buffers.
pub(crate) struct Stepper {
    op: Tendency,
    k: Vec<Complex64>,
    stage: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl Stepper {
    pub(crate) fn new(grid: Arc<Grid2D>, m: &LogMultiplier, dealias: bool) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self {
            op: Tendency::new(grid, m, dealias),
            k: zero.clone(),
            stage: zero.clone(),
            acc: zero,
        }
    }

    /// Advances `theta` in place by `dt`.
    pub(crate) fn step(&mut self, theta: &mut [Complex64], drift: [f64; 2], dt: f64) -> Result<()> {
        self.acc.copy_from_slice(theta);
        let weights = [dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0];
        let offsets = [dt / 2.0, dt / 2.0, dt];
        self.op.eval(theta, drift, &mut self.k)?;
        for stage in 0..4 {
            for idx in 0..theta.len() {
                self.acc[idx] += self.k[idx] * weights[stage];
            }
            if stage == 3 {
                break;
            }
            for idx in 0..theta.len() {
                self.stage[idx] = theta[idx] + self.k[idx] * offsets[stage];
            }
            self.op.eval(&self.stage, drift, &mut self.k)?;
        }
        theta.copy_from_slice(&self.acc);
        Ok(())
    }
}

/// One RK4 step of size `dt`; drift is carried unchanged.
pub fn step_rk4(state: &FlowState, dt: f64) -> Result<FlowState> {
    step_rk4_with(state, dt, true)
}

pub fn step_rk4_with(state: &FlowState, dt: f64, dealias: bool) -> Result<FlowState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("time step must be > 0, got {dt}")));
    }
    let mut next = state.clone();
    let mut stepper = Stepper::new(state.grid().clone(), &state.multiplier, dealias);
    stepper.step(next.theta_hat.coeffs_mut(), state.drift, dt)?;
    next.time = state.time + dt;
    Ok(next)
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub final_state: FlowState,
    pub records: Vec<DiagnosticsRecord>,
    /// One snapshot per requested probe, in ascending probe order.
    pub snapshots: Vec<FlowState>,
    pub steps: usize,
}

/// Integrates from `state0.time` to `config.t_end`.
///
/// Steps are clipped so that every probe time is hit exactly; diagnostics are
/// recorded at the start, every `diagnostic_stride` steps, at each probe and at
/// the end. Non-finite values abort with [`Error::BlowUp`].
pub fn integrate(state0: &FlowState, config: &SolverConfig, probes: &[f64]) -> Result<IntegrationResult> {
    config.validate()?;
    let t0 = state0.time;
    if !(config.t_end > t0) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {} must exceed the initial time {t0}",
            config.t_end
        )));
    }
    let mut probes = probes.to_vec();
    probes.sort_by(f64::total_cmp);
    if let Some(p) = probes.iter().find(|p| !(**p >= t0 && **p <= config.t_end)) {
        return Err(Error::InvalidArgument(format!(
            "probe time {p} lies outside [{t0}, {}]",
            config.t_end
        )));
    }

    let grid = state0.grid().clone();
    let mut stepper = Stepper::new(grid.clone(), &state0.multiplier, config.dealias_enabled);
    let mut state = state0.clone();
    let diag = |s: &FlowState| conserved_diagnostics(s, &config.p_list, &config.s_list);
    let mut records = vec![diag(&state)?];
    let mut snapshots = Vec::with_capacity(probes.len());
    let mut next_probe = 0;
    while next_probe < probes.len() && probes[next_probe] <= t0 {
        snapshots.push(state.clone());
        next_probe += 1;
    }

    let mut steps = 0usize;
    while state.time < config.t_end {
        let mut dt = match config.fixed_dt {
            Some(dt) => dt,
            None => dt_from_speed(
                stepper.op.max_speed(state.theta_hat.coeffs(), state.drift),
                &grid,
                config,
            ),
        };
        let target = probes.get(next_probe).copied().unwrap_or(config.t_end);
        let remaining = target - state.time;
        let hit = dt >= remaining - 1e-9 * dt;
        if hit {
            dt = remaining;
        }
        let blow_up = |time: f64, records: &[DiagnosticsRecord]| Error::BlowUp {
            time,
            last: records.last().cloned().map(Box::new),
        };
        match stepper.step(state.theta_hat.coeffs_mut(), state.drift, dt) {
            Ok(()) => {}
            Err(Error::NonFinite(_)) => return Err(blow_up(state.time, &records)),
            Err(e) => return Err(e),
        }
        if !state.theta_hat.is_finite() {
            return Err(blow_up(state.time, &records));
        }
        state.time = if hit { target } else { state.time + dt };
        steps += 1;

        let mut record_now = steps.is_multiple_of(config.diagnostic_stride) || state.time >= config.t_end;
        while next_probe < probes.len() && probes[next_probe] <= state.time {
            snapshots.push(state.clone());
            next_probe += 1;
            record_now = true;
        }
        if record_now {
            let rec = diag(&state)?;
            if !rec.is_finite() {
                return Err(blow_up(state.time, &records));
            }
            records.push(rec);
        }
    }
    Ok(IntegrationResult {
        final_state: state,
        records,
        snapshots,
        steps,
    })
}

impl DiagnosticsRecord {
    pub fn is_finite(&self) -> bool {
        [self.time, self.l2_theta, self.linf_theta, self.energy, self.max_speed]
            .iter()
            .chain(self.lp_theta.iter().map(|(_, v)| v))
            .chain(self.hs_theta.iter().map(|(_, v)| v))
            .all(|v| v.is_finite())
    }

    pub fn lp(&self, p: f64) -> Option<f64> {
        self.lp_theta.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    pub fn hs(&self, s: f64) -> Option<f64> {
        self.hs_theta.iter().find(|(q, _)| *q == s).map(|(_, v)| *v)
    }
}

/// `L²`, `L^∞`, `L^p`, `H^s` norms of `θ`, the energy
/// `½ Σ_{k≠0} T_γ(|k|²)|θ̂_k|²/|k|²` and the maximal speed.
pub fn conserved_diagnostics(state: &FlowState, p_list: &[f64], s_list: &[f64]) -> Result<DiagnosticsRecord> {
    let theta = &state.theta_hat;
    let grid = state.grid();
    let samples = crate::spectral::to_physical_unchecked(theta).into_samples();
    let mut energy = 0.0;
    for (idx, c) in theta.coeffs().iter().enumerate().skip(1) {
        let ksq = grid.ksq(idx);
        energy += state.multiplier.value(ksq) * c.norm_sqr() / ksq;
    }
    let lp_theta = p_list
        .iter()
        .map(|&p| Ok((p, lp_norm_of(&samples, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let hs_theta = s_list
        .iter()
        .map(|&s| (s, sobolev_norm(theta, NormSpec::inhomogeneous(s))))
        .collect();
    let mut op = Tendency::new(grid.clone(), &state.multiplier, false);
    Ok(DiagnosticsRecord {
        time: state.time,
        l2_theta: theta.energy_sum().sqrt(),
        linf_theta: sup_norm_refined_with(theta, &samples),
        lp_theta,
        energy: 0.5 * energy,
        hs_theta,
        max_speed: op.max_speed(theta.coeffs(), state.drift),
    })
}
