//! Numerical toolkit for two-dimensional Euler-type flows whose Biot–Savart
//! law is damped by the logarithmic multiplier `(ln(e + |k|²))^{−γ}`.
//!
//! Layers, bottom up: [`spectral`] (grid, transforms, multiplier), [`velocity`],
//! [`dynamics`] (RK4 integration), [`analysis`] (norms and inequality reports),
//! [`solutions`] (exact families and synthetic data), [`experiments`] and [`io`].

// `!(x > a)` is used on purpose so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod pinned;
pub mod solutions;
pub mod spectral;
pub mod velocity;

pub use error::{Error, Result};
