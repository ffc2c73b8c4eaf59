use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Smooth cutoff: 1 on `r ≤ 1`, 0 on `r ≥ 2`, and
/// `h(2−r) / (h(2−r) + h(r−1))` in between with `h(x) = exp(−1/x)`.
pub fn bump(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = h(2.0 - r);
        let b = h(r - 1.0);
        a / (a + b)
    }
}

fn h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKind {
    /// `P_{≤M}`
    Low,
    /// `P_M = P_{≤M} − P_{≤M/2}`
    Annulus,
    /// `P_{>M}`
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LPBand {
    pub kind: BandKind,
    pub m: f64,
}

impl LPBand {
    pub fn new(kind: BandKind, m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("band scale M must be > 0, got {m}")));
        }
        Ok(Self { kind, m })
    }

    pub fn low(m: f64) -> Result<Self> {
        Self::new(BandKind::Low, m)
    }

    pub fn annulus(m: f64) -> Result<Self> {
        Self::new(BandKind::Annulus, m)
    }

    pub fn high(m: f64) -> Result<Self> {
        Self::new(BandKind::High, m)
    }

    /// Symbol of the projection at `|k|`.
    pub fn symbol(&self, kabs: f64) -> f64 {
        let low = bump(kabs / self.m);
        match self.kind {
            BandKind::Low => low,
            BandKind::Annulus => low - bump(2.0 * kabs / self.m),
            BandKind::High => 1.0 - low,
        }
    }
}

/// Multiplies each coefficient by the band symbol at `|k|`.
pub fn lp_projection(field: &SpectralField, band: LPBand) -> SpectralField {
    field.map_modes(|k1, k2| band.symbol(((k1 * k1 + k2 * k2) as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::random_band_field;
    use crate::spectral::make_grid;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 1..100 {
            let v = bump(1.0 + i as f64 / 100.0);
            assert!(v <= prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn low_band_above_corner_is_identity() {
        let g = make_grid(32).unwrap();
        let f = random_band_field(3, &g, 1.0, 22.0, 1.0).unwrap();
        let m = 2f64.sqrt() * 16.0;
        let p = lp_projection(&f, LPBand::low(m).unwrap());
        assert_eq!(p.coeffs(), f.coeffs());
    }

    #[test]
    fn telescoping_partition() {
        let g = make_grid(64).unwrap();
        let f = random_band_field(11, &g, 1.0, 40.0, 0.5).unwrap();
        let (j, k) = (0, 5);
        let mut sum = lp_projection(&f, LPBand::low(2f64.powi(j)).unwrap());
        for l in j..k {
            sum.add_scaled(1.0, &lp_projection(&f, LPBand::annulus(2f64.powi(l + 1)).unwrap()))
                .unwrap();
        }
        sum.add_scaled(1.0, &lp_projection(&f, LPBand::high(2f64.powi(k)).unwrap()))
            .unwrap();
        for (a, b) in sum.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).norm() <= 4.0 * f64::EPSILON * b.norm());
        }
    }

    #[test]
    fn annulus_support() {
        let g = make_grid(64).unwrap();
        let f = random_band_field(5, &g, 1.0, 30.0, 0.0).unwrap();
        for m in [1.0, 2.0, 4.0, 8.0, 5.5] {
            let p = lp_projection(&f, LPBand::annulus(m).unwrap());
            for (idx, c) in p.coeffs().iter().enumerate() {
                let kabs = g.ksq(idx).sqrt();
                if kabs <= m / 2.0 || kabs >= 2.0 * m {
                    assert_eq!(c.norm(), 0.0);
                }
            }
        }
        assert!(LPBand::annulus(0.0).is_err());
    }
}
