//! Regression constants frozen from reference runs.
//!
//! Each value is the next three-significant-figure number strictly above the
//! maximum observed in its reference run (see `tests/pinning.rs`). Re-pin with
//! `cargo test -p logeuler --test pinning -- --ignored --nocapture`.

/// Log-interpolation corpus at 64², `p = 4`, `γ ∈ {0, 0.25}`; observed 0.1558682.
pub const LOG_INTERP_SUP_RATIO: f64 = 0.156;

/// Kato–Ponce corpus at 64², `s ∈ {2.5, 3}`; observed 0.4545110.
pub const KATO_PONCE_SUP_RATIO: f64 = 0.455;

/// Comparison envelope constant fitted on `0 < t ≤ 0.1` of the default
/// gamma-comparison run (64², seed 7, `γ ∈ {0.02, 0.01, 0.005}`); observed 5.672698e−7.
pub const GAMMA_COMPARISON_C0: f64 = 5.68e-7;

/// `sup_{t≤1} ‖θ(t)‖_{H^{2.5}} / ‖θ₀‖_{H^{2.5}}` of the default two-blob run at 256²;
/// observed 1.0 (attained at `t = 0`).
pub const SUPPORT_HS_RATIO: f64 = 1.01;
