//! Exact solution families and synthetic data.
//!
//! The traveling shear family `θ = n^{1−s} sin(n x₂ − ω t)` with constant drift
//! `(0, ω/n)` solves the regularized system exactly for every `γ`: the shear
//! velocity is parallel to the level sets of `θ`, so only the drift transports
//! it. The `ω = ±1` pair starts from identical vorticity, has velocities that
//! differ by `2/n` at `t = 0`, and separates by about `√2·T_γ(n²)|sin t|` in `H^s`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{to_physical_unchecked, Grid2D, LogMultiplier, RealField, SpectralField};
use crate::velocity::FlowState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HMFamilySpec {
    pub n: u32,
    pub s: f64,
    pub omega: f64,
    pub gamma: f64,
}

impl HMFamilySpec {
    pub fn new(n: u32, s: f64, omega: f64, gamma: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("shear frequency n must be ≥ 1".into()));
        }
        if !(s > 2.0) {
            return Err(Error::InvalidArgument(format!("Sobolev index must exceed 2, got {s}")));
        }
        if omega != 1.0 && omega != -1.0 {
            return Err(Error::InvalidArgument(format!("omega must be ±1, got {omega}")));
        }
        LogMultiplier::new(gamma)?;
        Ok(Self { n, s, omega, gamma })
    }

    pub fn amplitude(&self) -> f64 {
        (self.n as f64).powf(1.0 - self.s)
    }
}

/// The traveling shear state at time `t`, built directly in spectral space.
pub fn hm_exact_state(spec: &HMFamilySpec, t: f64, grid: &Arc<Grid2D>) -> Result<FlowState> {
    let n = spec.n as i64;
    if n > grid.dealias_cutoff() {
        return Err(Error::InvalidArgument(format!(
            "shear frequency {n} is not resolved: dealias cutoff is {}",
            grid.dealias_cutoff()
        )));
    }
    // A sin(n x₂ − ωt) = (A/2i) e^{−iωt} e^{inx₂} + c.c.
    let a = spec.amplitude();
    let c = Complex64::new(0.0, -a / 2.0) * Complex64::from_polar(1.0, -spec.omega * t);
    let mut theta = SpectralField::zeros(grid.clone());
    theta.set_coeff(0, n, c);
    theta.set_coeff(0, -n, c.conj());
    FlowState::new(theta, [0.0, spec.omega / n as f64], t, LogMultiplier::new(spec.gamma)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HmSeparation {
    /// `‖u⁺(t) − u⁻(t)‖_{H^s}`
    pub velocity_separation_hs: f64,
    /// `‖u⁺(0) − u⁻(0)‖_{H^s} = 2/n`
    pub data_separation_hs: f64,
}

/// Closed-form `H^s` separation of the `ω = ±1` pair.
///
/// `u⁺ − u⁻ = (2 T n^{−s} sin t · sin(n x₂), 2/n)`, so
/// `‖u⁺ − u⁻‖²_{H^s} = (2 T n^{−s} sin t)² (1 + n²)^s / 2 + 4/n²`.
pub fn hm_separation_closed_form(n: u32, s: f64, gamma: f64, t: f64) -> Result<HmSeparation> {
    if n < 1 {
        return Err(Error::InvalidArgument("shear frequency n must be ≥ 1".into()));
    }
    let nf = n as f64;
    let t_gamma = LogMultiplier::new(gamma)?.value(nf * nf);
    let a = 2.0 * t_gamma * nf.powf(-s) * t.sin();
    let data = 2.0 / nf;
    Ok(HmSeparation {
        velocity_separation_hs: (a * a * (1.0 + nf * nf).powf(s) / 2.0 + data * data).sqrt(),
        data_separation_hs: data,
    })
}

/// Mean-zero, Hermitian random field with `|c_k| = |k|^{−decay}` on
/// `kmin ≤ |k| ≤ kmax` and seeded uniform phases.
///
/// Modes are visited in storage order and the phase of each half-plane
/// representative is drawn from a ChaCha8 stream, so the result depends only on
/// the seed and the grid.
pub fn random_band_field(seed: u64, grid: &Arc<Grid2D>, kmin: f64, kmax: f64, decay: f64) -> Result<SpectralField> {
    if !(kmin >= 1.0) || !(kmax >= kmin) {
        return Err(Error::InvalidArgument(format!(
            "band needs 1 ≤ kmin ≤ kmax, got [{kmin}, {kmax}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nyq = grid.nyquist();
    let mut field = SpectralField::zeros(grid.clone());
    let mut count = 0usize;
    for idx in 0..grid.len() {
        let (k1, k2) = grid.mode(idx);
        if k1 == -nyq || k2 == -nyq || !(k2 > 0 || (k2 == 0 && k1 > 0)) {
            continue;
        }
        let kabs = grid.ksq(idx).sqrt();
        if kabs < kmin || kabs > kmax {
            continue;
        }
        let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let c = Complex64::from_polar(kabs.powf(-decay), 2.0 * PI * unit);
        field.coeffs_mut()[idx] = c;
        field.coeffs_mut()[grid.conjugate_index(idx)] = c.conj();
        count += 1;
    }
    if count == 0 {
        return Err(Error::InvalidArgument(format!(
            "no resolved lattice modes in band [{kmin}, {kmax}]"
        )));
    }
    Ok(field)
}

/// [`random_band_field`] rescaled to a prescribed `L²` norm.
pub fn random_smooth_field(
    seed: u64,
    grid: &Arc<Grid2D>,
    kmax: f64,
    decay: f64,
    l2_norm: f64,
) -> Result<SpectralField> {
    let mut field = random_band_field(seed, grid, 1.0, kmax, decay)?;
    let current = field.energy_sum().sqrt();
    field.scale(l2_norm / current);
    Ok(field)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub amplitude: f64,
}

impl BlobSpec {
    pub fn new(center: [f64; 2], radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI / 2.0) {
            return Err(Error::InvalidArgument(format!(
                "blob radius must lie in (0, π/2), got {radius}"
            )));
        }
        if !(center.iter().all(|c| c.is_finite()) && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(
                "blob center and amplitude must be finite".into(),
            ));
        }
        Ok(Self {
            center,
            radius,
            amplitude,
        })
    }
}

fn periodic_offset(a: f64, b: f64) -> f64 {
    let l = 2.0 * PI;
    let d = (a - b).rem_euclid(l);
    d.min(l - d)
}

/// `A exp(1 − 1/(1 − ρ²))` for `ρ = |x − c|/r < 1`, zero outside (nearest periodic image).
pub fn bump_blob(spec: &BlobSpec, grid: &Arc<Grid2D>) -> RealField {
    RealField::from_fn(grid.clone(), |x1, x2| {
        let d1 = periodic_offset(x1, spec.center[0]);
        let d2 = periodic_offset(x2, spec.center[1]);
        let rho2 = (d1 * d1 + d2 * d2) / (spec.radius * spec.radius);
        if rho2 < 1.0 {
            spec.amplitude * (1.0 - 1.0 / (1.0 - rho2)).exp()
        } else {
            0.0
        }
    })
}

/// Sum of two disjoint bumps. The mean is *not* removed; callers using the
/// result as vorticity subtract it first.
pub fn bump_blob_pair(f: &BlobSpec, g: &BlobSpec, grid: &Arc<Grid2D>) -> Result<RealField> {
    let d1 = periodic_offset(f.center[0], g.center[0]);
    let d2 = periodic_offset(f.center[1], g.center[1]);
    let gap = d1.hypot(d2) - f.radius - g.radius;
    if gap <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "blob supports overlap on the torus (gap {gap:.3e})"
        )));
    }
    let mut sum = bump_blob(f, grid);
    for (a, b) in sum.samples_mut().iter_mut().zip(bump_blob(g, grid).samples()) {
        *a += b;
    }
    Ok(sum)
}

/// Fields for the logarithmic-interpolation corpus: 100 random band-limited
/// shapes with `L²` amplitudes log-spaced over `[10⁻², 10²]`.
pub fn log_interp_corpus(grid: &Arc<Grid2D>) -> Vec<RealField> {
    (0..100)
        .map(|i| {
            let amp = 10f64.powf(-2.0 + 4.0 * i as f64 / 99.0);
            let f = random_smooth_field(1000 + i as u64, grid, 8.0, 1.5, amp).expect("corpus band is non-empty");
            to_physical_unchecked(&f)
        })
        .collect()
}

/// Pairs for the Kato–Ponce corpus, band-limited to `|k| ≤ n/4 − 2`.
pub fn kato_ponce_corpus(grid: &Arc<Grid2D>) -> Vec<(RealField, RealField)> {
    let kmax = (grid.n() / 4) as f64 - 2.0;
    (0..100)
        .map(|i| {
            let f = random_smooth_field(2000 + 2 * i as u64, grid, kmax, 2.0, 1.0).expect("corpus band is non-empty");
            let g = random_smooth_field(2001 + 2 * i as u64, grid, kmax, 2.0, 1.0).expect("corpus band is non-empty");
            (to_physical_unchecked(&f), to_physical_unchecked(&g))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{sobolev_norm, NormSpec};
    use crate::spectral::make_grid;

    #[test]
    fn hm_pair_shares_initial_vorticity() {
        let g = make_grid(32).unwrap();
        let plus = hm_exact_state(&HMFamilySpec::new(4, 2.5, 1.0, 0.1).unwrap(), 0.0, &g).unwrap();
        let minus = hm_exact_state(&HMFamilySpec::new(4, 2.5, -1.0, 0.1).unwrap(), 0.0, &g).unwrap();
        assert_eq!(plus.theta_hat.coeffs(), minus.theta_hat.coeffs());
        assert_eq!(plus.drift[1] - minus.drift[1], 2.0 / 4.0);
        assert_eq!(plus.drift[0], minus.drift[0]);
    }

    #[test]
    fn hm_state_matches_sampled_formula() {
        let g = make_grid(32).unwrap();
        let spec = HMFamilySpec::new(5, 3.0, -1.0, 0.2).unwrap();
        let t = 0.7;
        let st = hm_exact_state(&spec, t, &g).unwrap();
        let f = to_physical_unchecked(&st.theta_hat);
        let a = 5f64.powf(-2.0);
        for (idx, v) in f.samples().iter().enumerate() {
            let (_, x2) = g.point(idx);
            assert!((v - a * (5.0 * x2 + t).sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn hm_rejects_unresolved_frequency() {
        let g = make_grid(32).unwrap();
        let spec = HMFamilySpec::new(11, 2.5, 1.0, 0.0).unwrap();
        assert!(hm_exact_state(&spec, 0.0, &g).is_err());
        assert!(HMFamilySpec::new(4, 2.0, 1.0, 0.0).is_err());
        assert!(HMFamilySpec::new(4, 2.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn separation_at_zero_is_data_separation() {
        for n in [1, 8, 64] {
            let sep = hm_separation_closed_form(n, 2.5, 0.01, 0.0).unwrap();
            assert_eq!(sep.velocity_separation_hs, sep.data_separation_hs);
            assert_eq!(sep.data_separation_hs, 2.0 / n as f64);
        }
    }

    #[test]
    fn separation_golden_value() {
        // 30-digit evaluation of the closed form at n = 32, s = 2.5, γ = 0.01, t = π/2
        let sep = hm_separation_closed_form(32, 2.5, 0.01, PI / 2.0).unwrap();
        assert!((sep.velocity_separation_hs - 1.390_190_488_337_392_5).abs() < 1e-13);
    }

    #[test]
    fn separation_tends_to_sqrt2_sin_for_euler() {
        let t = 0.9f64;
        let sep = hm_separation_closed_form(1 << 20, 2.5, 0.0, t).unwrap();
        assert!((sep.velocity_separation_hs - 2f64.sqrt() * t.sin()).abs() < 1e-5);
    }

    #[test]
    fn random_field_properties() {
        let g = make_grid(32).unwrap();
        let a = random_band_field(9, &g, 1.0, 10.0, 2.0).unwrap();
        let b = random_band_field(9, &g, 1.0, 10.0, 2.0).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert_eq!(a.mean(), Complex64::new(0.0, 0.0));
        assert_eq!(a.hermitian_defect(), 0.0);
        let c = random_band_field(10, &g, 1.0, 10.0, 2.0).unwrap();
        assert_ne!(a.coeffs(), c.coeffs());
        assert!(random_band_field(1, &g, 0.0, 4.0, 1.0).is_err());
        assert!(random_band_field(1, &g, 1.2, 1.3, 1.0).is_err());
    }

    #[test]
    fn random_field_hs_bounded_in_resolution() {
        // decay 4 gives Σ|k|^{2s−8} over a 2D lattice, convergent for s = 2.5
        let norms: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| {
                let g = make_grid(n).unwrap();
                let f = random_band_field(4, &g, 1.0, (n / 3) as f64, 4.0).unwrap();
                sobolev_norm(&f, NormSpec::inhomogeneous(2.5))
            })
            .collect();
        // coefficient-sum oracle: Σ_{1≤|k|≤R} (1+|k|²)^{2.5}|k|^{-8} grows like log R, far below 10
        let oracle = |r: i64| -> f64 {
            let mut s = 0.0;
            for a in -r..=r {
                for b in -r..=r {
                    let k2 = (a * a + b * b) as f64;
                    if k2 >= 1.0 && k2 <= (r * r) as f64 {
                        s += (1.0 + k2).powf(2.5) * k2.powf(-4.0);
                    }
                }
            }
            s.sqrt()
        };
        for (norm, n) in norms.iter().zip([32i64, 64, 128]) {
            assert!(
                (norm - oracle(n / 3)).abs() < 1e-9 * norm,
                "{norm} vs {}",
                oracle(n / 3)
            );
        }
        assert!(norms[2] < 1.5 * norms[0]);
    }

    #[test]
    fn blob_properties() {
        let g = make_grid(64).unwrap();
        let spec = BlobSpec::new([PI, PI], 0.6, 2.0).unwrap();
        let f = bump_blob(&spec, &g);
        let max = f.samples().iter().fold(0.0f64, |m, v| m.max(*v));
        assert!((max - 2.0).abs() < 1e-15);
        assert!(f.mean() > 0.0);
        assert!(BlobSpec::new([0.0, 0.0], 1.6, 1.0).is_err());
        let near = BlobSpec::new([PI + 1.0, PI], 0.6, 1.0).unwrap();
        assert!(bump_blob_pair(&spec, &near, &g).is_err());
        // periodic images count: centers 0.1 and 2π − 0.1 are 0.2 apart
        let a = BlobSpec::new([0.1, 1.0], 0.3, 1.0).unwrap();
        let b = BlobSpec::new([2.0 * PI - 0.1, 1.0], 0.3, 1.0).unwrap();
        assert!(bump_blob_pair(&a, &b, &g).is_err());
    }
}
