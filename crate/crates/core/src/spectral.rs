//! Periodic grid, Fourier transforms and diagonal spectral operators.
//!
//! The domain is the 2π-periodic torus sampled on an `n × n` grid. Sample
//! `(i1, i2)` sits at `x = (2π i1 / n, 2π i2 / n)` and is stored at flat index
//! `i1 * n + i2`, so the second axis (x₂) is contiguous. Spectral coefficients
//! use the same layout with the standard FFT wavenumber ordering per axis and
//! the normalization
//!
//! ```text
//! c_k = n⁻² Σ_j f(x_j) e^{-i k·x_j},     f(x_j) = Σ_k c_k e^{i k·x_j}
//! ```
//!
//! so that `Σ_k |c_k|²` is the mean square of the samples.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::num_traits::Zero;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance on Hermitian symmetry accepted by [`to_physical`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Coordinate axis of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// Uniform periodic grid with its wavenumber lattice, dealias mask and FFT plans.
pub struct Grid2D {
    n: usize,
    wavenumbers: Vec<i64>,
    dealias_mask: Vec<bool>,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D").field("n", &self.n).finish()
    }
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

/// Builds a grid with `n` samples per axis. `n` must be even and at least 8.
pub fn make_grid(n: usize) -> Result<Arc<Grid2D>> {
    Grid2D::new(n).map(Arc::new)
}

impl Grid2D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n = {n} is below the minimum of 8")));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n = {n} must be even")));
        }
        let half = (n / 2) as i64;
        let wavenumbers: Vec<i64> = (0..n as i64).map(|i| if i < half { i } else { i - n as i64 }).collect();
        let cutoff = (n / 3) as i64;
        let mut dealias_mask = vec![false; n * n];
        for (i1, &k1) in wavenumbers.iter().enumerate() {
            for (i2, &k2) in wavenumbers.iter().enumerate() {
                dealias_mask[i1 * n + i2] = k1.abs().max(k2.abs()) <= cutoff;
            }
        }
        let mut planner = FftPlanner::new();
        let fft_forward = planner.plan_fft_forward(n);
        let fft_inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            n,
            wavenumbers,
            dealias_mask,
            fft_forward,
            fft_inverse,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points (and of spectral modes).
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Period of the domain, always 2π.
    #[inline]
    pub fn length(&self) -> f64 {
        2.0 * PI
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Per-axis integer wavenumbers in FFT order `0, 1, …, n/2−1, −n/2, …, −1`.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    pub fn nyquist(&self) -> i64 {
        (self.n / 2) as i64
    }

    /// Largest per-axis wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias_mask
    }

    /// Wavenumber pair `(k1, k2)` of the mode stored at `idx`.
    #[inline]
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (self.wavenumbers[idx / self.n], self.wavenumbers[idx % self.n])
    }

    #[inline]
    pub fn ksq(&self, idx: usize) -> f64 {
        let (k1, k2) = self.mode(idx);
        (k1 * k1 + k2 * k2) as f64
    }

    /// Flat index of the mode `(k1, k2)`, taken modulo `n` per axis.
    #[inline]
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        let n = self.n as i64;
        (k1.rem_euclid(n) * n + k2.rem_euclid(n)) as usize
    }

    /// Flat index of the mode `-k` for the mode stored at `idx`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i1, i2) = (idx / n, idx % n);
        ((n - i1) % n) * n + (n - i2) % n
    }

    /// Physical coordinates of grid point `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let dx = self.dx();
        ((idx / self.n) as f64 * dx, (idx % self.n) as f64 * dx)
    }

    /// In-place unnormalized 2D FFT. `inverse` selects the `e^{+ikx}` sign.
    pub(crate) fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let fft = if inverse { &self.fft_inverse } else { &self.fft_forward };
        let mut scratch = vec![Complex64::zero(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
        fft.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

pub(crate) fn check_same_grid(a: &Grid2D, b: &Grid2D) -> Result<()> {
    if a.n != b.n {
        return Err(Error::GridMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

/// Real samples on the grid, row-major with x₂ contiguous.
#[derive(Debug, Clone)]
pub struct RealField {
    grid: Arc<Grid2D>,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Arc<Grid2D>, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Arc<Grid2D>) -> Self {
        let samples = vec![0.0; grid.len()];
        Self { grid, samples }
    }

    /// Samples `f(x₁, x₂)` at every grid point.
    pub fn from_fn(grid: Arc<Grid2D>, f: impl Fn(f64, f64) -> f64) -> Self {
        let samples = (0..grid.len())
            .map(|idx| {
                let (x1, x2) = grid.point(idx);
                f(x1, x2)
            })
            .collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Grid mean with normalized measure.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Fourier coefficients of a field on the grid.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid2D>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Arc<Grid2D>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Arc<Grid2D>) -> Self {
        let coeffs = vec![Complex64::zero(); grid.len()];
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of the mode `(k1, k2)` (indices taken modulo `n`).
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    pub fn set_coeff(&mut self, k1: i64, k2: i64, value: Complex64) {
        let idx = self.grid.index_of(k1, k2);
        self.coeffs[idx] = value;
    }

    /// The mean (k = 0) coefficient.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `max_k |c_{-k} - conj(c_k)|`, relative to `max_k |c_k|` (0 for the zero field).
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let defect = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| (self.coeffs[self.grid.conjugate_index(idx)] - c.conj()).norm())
            .fold(0.0, f64::max);
        defect / scale
    }

    /// `Σ_k |c_k|²`, which equals the normalized-measure mean square of the samples.
    pub fn energy_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: f64, other: &SpectralField) -> Result<()> {
        check_same_grid(&self.grid, &other.grid)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
        Ok(())
    }

    /// `self - other`.
    pub fn difference(&self, other: &SpectralField) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(-1.0, other)?;
        Ok(out)
    }

    /// Applies a real per-mode factor given as a function of `(k1, k2)`.
    pub fn map_modes(&self, factor: impl Fn(i64, i64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let (k1, k2) = self.grid.mode(idx);
                c * factor(k1, k2)
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Largest `max(|k1|, |k2|)` carrying a coefficient above `tol · max|c|`.
    pub fn band_limit(&self, tol: f64) -> i64 {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol * scale)
            .map(|(idx, _)| {
                let (k1, k2) = self.grid.mode(idx);
                k1.abs().max(k2.abs())
            })
            .max()
            .unwrap_or(0)
    }
}

/// Forward transform under the `n⁻² Σ f e^{-ik·x}` convention.
pub fn to_spectrum(f: &RealField) -> Result<SpectralField> {
    if let Some(pos) = f.samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("sample {pos} of real field")));
    }
    Ok(to_spectrum_unchecked(f))
}

pub(crate) fn to_spectrum_unchecked(f: &RealField) -> SpectralField {
    let grid = f.grid.clone();
    let mut buf: Vec<Complex64> = f.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.fft2(&mut buf, false);
    let norm = 1.0 / grid.len() as f64;
    for c in &mut buf {
        *c *= norm;
    }
    SpectralField { grid, coeffs: buf }
}

/// Inverse transform. Rejects spectra that are not Hermitian within
/// [`HERMITIAN_TOLERANCE`] (relative to the largest coefficient).
pub fn to_physical(field: &SpectralField) -> Result<RealField> {
    if !field.is_finite() {
        return Err(Error::NonFinite("spectral field".into()));
    }
    let defect = field.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::HermitianViolation {
            defect,
            tolerance: HERMITIAN_TOLERANCE,
        });
    }
    Ok(to_physical_unchecked(field))
}

/// Inverse transform that keeps only the real part without checking symmetry.
pub(crate) fn to_physical_unchecked(field: &SpectralField) -> RealField {
    let mut buf = field.coeffs.clone();
    field.grid.fft2(&mut buf, true);
    RealField {
        grid: field.grid.clone(),
        samples: buf.into_iter().map(|c| c.re).collect(),
    }
}

/// The logarithmic Fourier multiplier `T_γ(|k|) = (ln(e + |k|²))^{-γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMultiplier {
    gamma: f64,
}

impl LogMultiplier {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!("gamma must be ≥ 0, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    /// The identity multiplier (classical Euler).
    pub fn identity() -> Self {
        Self { gamma: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `T_γ` at squared wavenumber `ksq`; `ksq` must be non-negative.
    pub fn eval(&self, ksq: f64) -> Result<f64> {
        if !(ksq >= 0.0) || !ksq.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "squared wavenumber must be finite and ≥ 0, got {ksq}"
            )));
        }
        Ok(self.value(ksq))
    }

    #[inline]
    pub(crate) fn value(&self, ksq: f64) -> f64 {
        if self.gamma == 0.0 {
            1.0
        } else {
            (-self.gamma * (E + ksq).ln().ln()).exp()
        }
    }

    /// Per-mode multiplier values on `grid` in storage order.
    pub fn table(&self, grid: &Grid2D) -> Vec<f64> {
        (0..grid.len()).map(|idx| self.value(grid.ksq(idx))).collect()
    }
}

/// `multiplier_eval`: free-function form of [`LogMultiplier::eval`].
pub fn multiplier_eval(m: &LogMultiplier, ksq: f64) -> Result<f64> {
    m.eval(ksq)
}

/// Multiplies every coefficient by `T_γ(k₁² + k₂²)`.
pub fn apply_multiplier(field: &SpectralField, m: &LogMultiplier) -> SpectralField {
    if m.gamma == 0.0 {
        return field.clone();
    }
    field.map_modes(|k1, k2| m.value((k1 * k1 + k2 * k2) as f64))
}

/// `∂_axis` as the mode-wise factor `i k_axis`, with Nyquist modes of that axis zeroed.
pub fn spectral_derivative(field: &SpectralField, axis: Axis) -> SpectralField {
    let grid = &field.grid;
    let nyq = grid.nyquist();
    let coeffs = field
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let (k1, k2) = grid.mode(idx);
            let k = match axis {
                Axis::X1 => k1,
                Axis::X2 => k2,
            };
            if k == -nyq {
                Complex64::zero()
            } else {
                Complex64::new(-c.im * k as f64, c.re * k as f64)
            }
        })
        .collect();
    SpectralField {
        grid: grid.clone(),
        coeffs,
    }
}

/// 2/3-rule truncation: zeroes every mode outside the grid's dealias mask.
pub fn dealias(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(field: &mut SpectralField) {
    let mask = field.grid.dealias_mask.clone();
    for (c, keep) in field.coeffs.iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::zero();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Arc<Grid2D> {
        make_grid(n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn grid_wavenumber_order_n8() {
        let g = grid(8);
        assert_eq!(g.wavenumbers(), &[0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.dealias_cutoff(), 2);
        for idx in 0..g.len() {
            let (k1, k2) = g.mode(idx);
            assert_eq!(g.dealias_mask()[idx], k1.abs().max(k2.abs()) <= 2);
            assert_eq!(g.dealias_mask()[idx], g.dealias_mask()[g.conjugate_index(idx)]);
        }
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(matches!(make_grid(7), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(6), Err(Error::InvalidGrid(_))));
        assert!(make_grid(100).is_ok());
    }

    #[test]
    fn constant_field_spectrum() {
        let g = grid(16);
        let f = RealField::from_fn(g.clone(), |_, _| 3.0);
        let s = to_spectrum(&f).unwrap();
        assert!(close(s.mean().re, 3.0, 1e-15));
        let rest: f64 = s.coeffs()[1..].iter().map(|c| c.norm()).sum();
        assert!(rest < 1e-13);
    }

    #[test]
    fn single_sine_mode() {
        let g = grid(16);
        let f = RealField::from_fn(g.clone(), |x1, _| (3.0 * x1).sin());
        let s = to_spectrum(&f).unwrap();
        let c = s.coeff(3, 0);
        assert!(c.re.abs() < 1e-15 && close(c.im, -0.5, 1e-14));
        let c = s.coeff(-3, 0);
        assert!(c.re.abs() < 1e-15 && close(c.im, 0.5, 1e-14));
        let others: f64 = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != g.index_of(3, 0) && *idx != g.index_of(-3, 0))
            .map(|(_, c)| c.norm())
            .sum();
        assert!(others < 1e-13);
    }

    #[test]
    fn to_physical_examples() {
        let g = grid(8);
        let mut s = SpectralField::zeros(g.clone());
        s.set_coeff(0, 0, Complex64::new(1.0, 0.0));
        let f = to_physical(&s).unwrap();
        assert!(f.samples().iter().all(|v| (v - 1.0).abs() < 1e-15));

        let mut s = SpectralField::zeros(g.clone());
        s.set_coeff(0, 1, Complex64::new(0.5, 0.0));
        s.set_coeff(0, -1, Complex64::new(0.5, 0.0));
        let f = to_physical(&s).unwrap();
        for (idx, v) in f.samples().iter().enumerate() {
            let (_, x2) = g.point(idx);
            assert!((v - x2.cos()).abs() < 1e-14);
        }

        let mut s = SpectralField::zeros(g);
        s.set_coeff(1, 0, Complex64::new(1.0, 0.0));
        assert!(matches!(to_physical(&s), Err(Error::HermitianViolation { .. })));
    }

    #[test]
    fn non_finite_samples_rejected() {
        let g = grid(8);
        let mut f = RealField::zeros(g);
        f.samples_mut()[5] = f64::NAN;
        assert!(matches!(to_spectrum(&f), Err(Error::NonFinite(_))));
    }

    #[test]
    fn multiplier_values() {
        let m = LogMultiplier::new(0.7).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 1.0);
        let id = LogMultiplier::identity();
        for ksq in [0.0, 1.0, 17.0, 1e6] {
            assert_eq!(id.eval(ksq).unwrap(), 1.0);
        }
        // (ln(e+1))^{-1/2}, 30-digit reference
        let half = LogMultiplier::new(0.5).unwrap();
        assert!((half.eval(1.0).unwrap() - 0.872_618_392_892_712_3).abs() < 1e-15);
        assert!(half.eval(-1.0).is_err());
        assert!(LogMultiplier::new(-0.1).is_err());
    }

    #[test]
    fn multiplier_strictly_monotone() {
        let m = LogMultiplier::new(0.3).unwrap();
        let mut prev = m.value(0.0);
        for ksq in 1..2000 {
            let v = m.value(ksq as f64);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
        for ksq in [1.0, 10.0, 1e4] {
            let mut prev = 1.0;
            for g in 1..50 {
                let v = LogMultiplier::new(g as f64 * 0.02).unwrap().value(ksq);
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn apply_multiplier_identity_and_single_mode() {
        let g = grid(32);
        let f = RealField::from_fn(g.clone(), |x1, x2| (2.0 * x1).sin() + (x1 - 3.0 * x2).cos());
        let s = to_spectrum(&f).unwrap();
        let same = apply_multiplier(&s, &LogMultiplier::identity());
        assert_eq!(same.coeffs(), s.coeffs());

        let n = 5i64;
        let mut single = SpectralField::zeros(g);
        single.set_coeff(0, n, Complex64::new(0.25, -0.5));
        let m = LogMultiplier::new(0.4).unwrap();
        let out = apply_multiplier(&single, &m);
        let expected = ((E + (n * n) as f64).ln()).powf(-0.4);
        let ratio = out.coeff(0, n) / single.coeff(0, n);
        assert!((ratio.re - expected).abs() < 1e-15 && ratio.im.abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let g = grid(32);
        let c = to_spectrum(&RealField::from_fn(g.clone(), |_, _| 2.0)).unwrap();
        let d = spectral_derivative(&c, Axis::X1);
        assert!(d.coeffs().iter().all(|c| c.norm() == 0.0));

        let n = 7.0;
        let s = to_spectrum(&RealField::from_fn(g.clone(), |_, x2| (n * x2).sin())).unwrap();
        let d = to_physical(&spectral_derivative(&s, Axis::X2)).unwrap();
        for (idx, v) in d.samples().iter().enumerate() {
            let (_, x2) = g.point(idx);
            assert!((v - n * (n * x2).cos()).abs() < 1e-11 * n);
        }

        let f = RealField::from_fn(g.clone(), |x1, x2| (x1 + 2.0 * x2).sin() * (3.0 * x1).cos());
        let s = to_spectrum(&f).unwrap();
        let d12 = spectral_derivative(&spectral_derivative(&s, Axis::X1), Axis::X2);
        let d21 = spectral_derivative(&spectral_derivative(&s, Axis::X2), Axis::X1);
        for (a, b) in d12.coeffs().iter().zip(d21.coeffs()) {
            assert!((a - b).norm() <= 1e-15 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn derivative_zeroes_nyquist() {
        let g = grid(8);
        let f = RealField::from_fn(g.clone(), |x1, _| (4.0 * x1).cos());
        let s = to_spectrum(&f).unwrap();
        assert!(s.coeff(-4, 0).norm() > 0.9);
        let d = spectral_derivative(&s, Axis::X1);
        assert!(d.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn dealias_examples() {
        let g = grid(24);
        let low = to_spectrum(&RealField::from_fn(g.clone(), |x1, x2| {
            (8.0 * x1).sin() * (3.0 * x2).cos()
        }))
        .unwrap();
        for (a, b) in dealias(&low).coeffs().iter().zip(low.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }

        let nyq = to_spectrum(&RealField::from_fn(g.clone(), |x1, _| (12.0 * x1).cos())).unwrap();
        assert!(dealias(&nyq).coeffs().iter().all(|c| c.norm() < 1e-15));

        let rough = to_spectrum(&RealField::from_fn(g, |x1, x2| (x1 * x2).sin() + x1.cos())).unwrap();
        let once = dealias(&rough);
        assert_eq!(dealias(&once).coeffs(), once.coeffs());
    }
}
