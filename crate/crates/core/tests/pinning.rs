//! Reference runs behind the constants in `logeuler::pinned`.
//!
//! Ignored by default; run with
//! `cargo test -p logeuler --test pinning -- --ignored --nocapture`
//! and copy the printed values (next three-figure value above) into `src/pinned.rs`.

use logeuler::analysis::{kato_ponce_report, log_interp_report};
use logeuler::experiments::{fitted_c0, run_gamma_comparison, run_support, GammaComparisonParams, SupportParams};
use logeuler::solutions::{kato_ponce_corpus, log_interp_corpus};
use logeuler::spectral::{make_grid, LogMultiplier};

/// Next three-significant-figure value strictly above `x > 0`.
fn round_up_3(x: f64) -> f64 {
    let scale = 10f64.powf(x.log10().floor() - 2.0);
    ((x / scale).floor() + 1.0) * scale
}

#[test]
#[ignore]
fn pin_inequality_corpora() {
    let grid = make_grid(64).unwrap();
    let mut worst = 0.0f64;
    for gamma in [0.0, 0.25] {
        let m = LogMultiplier::new(gamma).unwrap();
        for f in log_interp_corpus(&grid) {
            worst = worst.max(log_interp_report(&f, &m, 4.0).unwrap().ratio);
        }
    }
    println!("LOG_INTERP_SUP_RATIO observed {worst:.6e} -> {:.3e}", round_up_3(worst));

    let mut worst = 0.0f64;
    for s in [2.5, 3.0] {
        for (f, g) in kato_ponce_corpus(&grid) {
            worst = worst.max(kato_ponce_report(&f, &g, s).unwrap().ratio);
        }
    }
    println!("KATO_PONCE_SUP_RATIO observed {worst:.6e} -> {:.3e}", round_up_3(worst));
}

#[test]
#[ignore]
fn pin_gamma_comparison() {
    let params = GammaComparisonParams {
        c0: Some(f64::INFINITY),
        ..GammaComparisonParams::default()
    };
    let report = run_gamma_comparison(&params).unwrap();
    let c0 = fitted_c0(&report).unwrap();
    for v in &report.verdicts {
        println!("{} {} {}", v.name, v.pass, v.detail);
    }
    for n in &report.notes {
        println!("{n}");
    }
    println!("GAMMA_COMPARISON_C0 observed {c0:.6e} -> {:.3e}", round_up_3(c0));
}

#[test]
#[ignore]
fn pin_support() {
    let params = SupportParams {
        hs_ratio_bound: Some(f64::INFINITY),
        ..SupportParams::default()
    };
    let report = run_support(&params).unwrap();
    for v in &report.verdicts {
        println!("{} {} {}", v.name, v.pass, v.detail);
    }
    println!("{}", report.table("support").unwrap().to_csv());
    let ratio = report
        .table("support_constants")
        .unwrap()
        .column("hs_ratio_max")
        .unwrap()[0];
    println!("SUPPORT_HS_RATIO observed {ratio:.6e} -> {:.3e}", round_up_3(ratio));
}
