use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{to_physical_unchecked, RealField, SpectralField};

/// Sobolev index and whether the norm is homogeneous (`Ḣ^s`) or not (`H^s`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub s: f64,
    pub homogeneous: bool,
}

impl NormSpec {
    pub fn inhomogeneous(s: f64) -> Self {
        Self { s, homogeneous: false }
    }

    pub fn homogeneous(s: f64) -> Self {
        Self { s, homogeneous: true }
    }

    /// Weight `w(k)` such that the squared norm is `Σ_k w(k)|c_k|²`.
    #[inline]
    pub fn weight(&self, ksq: f64) -> f64 {
        if self.homogeneous {
            if ksq == 0.0 {
                0.0
            } else {
                ksq.powf(self.s)
            }
        } else {
            (1.0 + ksq).powf(self.s)
        }
    }
}

/// `(Σ_k w(k)|c_k|²)^{1/2}`, summed in storage order.
pub fn sobolev_norm(field: &SpectralField, spec: NormSpec) -> f64 {
    let grid = field.grid();
    field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| spec.weight(grid.ksq(idx)) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Grid-quadrature `L^p` norm with normalized measure; `p = ∞` gives the sample maximum.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64> {
    lp_norm_of(f.samples(), p)
}

pub(crate) fn lp_norm_of(samples: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Lebesgue exponent must be ≥ 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(samples.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let mean = samples.iter().map(|v| v.abs().powf(p)).sum::<f64>() / samples.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// Supremum of `|f|` for the trigonometric interpolant of `field`.
///
/// Starts from the largest grid-local maxima of `|f|` and refines each with a
/// safeguarded Newton iteration on the interpolant, so the result does not
/// depend on where the extremum falls relative to the grid.
pub fn sup_norm_refined(field: &SpectralField) -> f64 {
    let samples = to_physical_unchecked(field);
    sup_norm_refined_with(field, samples.samples())
}

pub(crate) fn sup_norm_refined_with(field: &SpectralField, samples: &[f64]) -> f64 {
    let grid = field.grid();
    let n = grid.n();
    let grid_max = samples.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if grid_max == 0.0 {
        return 0.0;
    }
    let mut candidates: Vec<usize> = (0..samples.len())
        .filter(|&idx| {
            let (i, j) = (idx / n, idx % n);
            let v = samples[idx].abs();
            (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let ii = (i as i64 + di).rem_euclid(n as i64) as usize;
                    let jj = (j as i64 + dj).rem_euclid(n as i64) as usize;
                    samples[ii * n + jj].abs() <= v
                })
            })
        })
        .collect();
    candidates.sort_by(|&a, &b| samples[b].abs().total_cmp(&samples[a].abs()).then(a.cmp(&b)));
    candidates.truncate(8);

    let poly = TrigPoly::new(field);
    let dx = grid.dx();
    let mut best = grid_max;
    for idx in candidates {
        let (mut x1, mut x2) = grid.point(idx);
        let sign = samples[idx].signum();
        let (mut value, mut grad, mut hess) = poly.eval(x1, x2);
        for _ in 0..30 {
            let (h11, h12, h22) = (sign * hess[0], sign * hess[1], sign * hess[2]);
            let det = h11 * h22 - h12 * h12;
            if !(h11 < 0.0 && det > 0.0) {
                break;
            }
            let (g1, g2) = (sign * grad[0], sign * grad[1]);
            let mut d1 = -(h22 * g1 - h12 * g2) / det;
            let mut d2 = -(-h12 * g1 + h11 * g2) / det;
            let len = d1.hypot(d2);
            if len > dx {
                d1 *= dx / len;
                d2 *= dx / len;
            }
            let (nv, ng, nh) = poly.eval(x1 + d1, x2 + d2);
            if sign * nv < sign * value {
                break;
            }
            x1 += d1;
            x2 += d2;
            value = nv;
            grad = ng;
            hess = nh;
            if len < 1e-13 {
                break;
            }
        }
        best = best.max(value.abs());
    }
    best
}

/// Nonzero Fourier modes of a field, evaluable at arbitrary points.
struct TrigPoly {
    modes: Vec<(i64, i64, Complex64)>,
    wavenumbers: Vec<i64>,
}

impl TrigPoly {
    fn new(field: &SpectralField) -> Self {
        let grid = field.grid();
        let modes = field
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(idx, c)| {
                let (k1, k2) = grid.mode(idx);
                (k1, k2, *c)
            })
            .collect();
        Self {
            modes,
            wavenumbers: grid.wavenumbers().to_vec(),
        }
    }

    /// Value, gradient and Hessian `(h11, h12, h22)` of the real part.
    fn eval(&self, x1: f64, x2: f64) -> (f64, [f64; 2], [f64; 3]) {
        let n = self.wavenumbers.len() as i64;
        let table = |x: f64| -> Vec<Complex64> {
            self.wavenumbers
                .iter()
                .map(|&k| Complex64::from_polar(1.0, k as f64 * x))
                .collect()
        };
        let (e1, e2) = (table(x1), table(x2));
        let mut value = 0.0;
        let mut grad = [0.0; 2];
        let mut hess = [0.0; 3];
        for &(k1, k2, c) in &self.modes {
            let z = c * e1[k1.rem_euclid(n) as usize] * e2[k2.rem_euclid(n) as usize];
            let (k1, k2) = (k1 as f64, k2 as f64);
            value += z.re;
            grad[0] -= k1 * z.im;
            grad[1] -= k2 * z.im;
            hess[0] -= k1 * k1 * z.re;
            hess[1] -= k1 * k2 * z.re;
            hess[2] -= k2 * k2 * z.re;
        }
        (value, grad, hess)
    }
}
