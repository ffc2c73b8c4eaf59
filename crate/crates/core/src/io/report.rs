use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::config::{ExperimentKind, RunConfig};
use super::snapshot::write_snapshot;
use crate::error::Result;
use crate::experiments::{
    run_continuity, run_convergence, run_gamma_comparison, run_nonuniform, run_support, ContinuityParams,
    ConvergenceParams, ExperimentReport, GammaComparisonParams, NonuniformParams, SupportParams,
};

/// Runs the experiment selected by a validated configuration.
pub fn run_experiment(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let solver = config.solver_config();
    let snapshots = config.snapshots.enabled;
    let grid_n = config.grid.n;
    let mut report = match config.experiment {
        ExperimentKind::Convergence => {
            let c = config.convergence.clone().unwrap_or_default();
            run_convergence(&ConvergenceParams {
                grid_sizes: c.grid_sizes.unwrap_or_else(|| vec![grid_n]),
                dt_list: c.dt_list,
                n: c.n,
                s: c.s,
                gammas: c.gamma_list,
                tolerance: c.tolerance,
                order_floor: c.order_floor,
                solver,
                snapshots,
            })?
        }
        ExperimentKind::Continuity => {
            let c = config.continuity.clone().unwrap_or_default();
            run_continuity(&ContinuityParams {
                grid_n,
                seed: config.seed,
                kmax: c.kmax,
                decay: c.decay,
                amplitude: c.amplitude,
                deltas: c.deltas,
                s: c.s,
                gamma: c.gamma,
                records: c.records,
                solver,
                snapshots,
            })?
        }
        ExperimentKind::GammaComparison => {
            let c = config.gamma_comparison.clone().unwrap_or_default();
            run_gamma_comparison(&GammaComparisonParams {
                grid_n,
                seed: config.seed,
                kmax: c.kmax,
                decay: c.decay,
                amplitude: c.amplitude,
                s: c.s,
                gammas: c.gamma_list,
                records: c.records,
                fit_window: c.fit_window,
                c0: c.c0,
                solver,
                snapshots,
            })?
        }
        ExperimentKind::Nonuniform => {
            let c = config.nonuniform.clone().unwrap_or_default();
            run_nonuniform(&NonuniformParams {
                grid_n,
                n_list: c.n_list,
                s: c.s,
                gamma: c.gamma,
                probes: c.probes,
                solver,
                snapshots,
            })?
        }
        ExperimentKind::Support => {
            let c = config.support.clone().unwrap_or_default();
            run_support(&SupportParams {
                grid_n,
                blobs: c.blobs,
                gamma: c.gamma,
                s: c.s,
                threshold: c.threshold,
                records: c.records,
                hs_ratio_bound: c.hs_ratio_bound,
                solver,
                snapshots,
            })?
        }
    };
    report.config = serde_json::to_value(config)?;
    report.wall_time = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub wall_time_s: f64,
    pub threads: usize,
    pub passed: bool,
    pub files: Vec<String>,
}

/// Writes `report.json`, one `<table>.csv` per table, snapshots (if any) under
/// `snapshots/`, and `manifest.json`. Only the manifest carries run-dependent
/// metadata such as the wall time.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut files = vec!["report.json".to_string()];
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    for table in &report.tables {
        let name = format!("{}.csv", table.name);
        fs::write(dir.join(&name), table.to_csv())?;
        files.push(name);
    }
    if !report.snapshots.is_empty() {
        fs::create_dir_all(dir.join("snapshots"))?;
        for snap in &report.snapshots {
            let name = format!("snapshots/{}.f64", snap.name);
            write_snapshot(&snap.field, snap.time, snap.gamma, "vorticity", &dir.join(&name))?;
            files.push(name);
        }
    }
    let manifest = Manifest {
        experiment: report.experiment.clone(),
        version: report.version.clone(),
        seed: report.config.get("seed").and_then(|s| s.as_u64()),
        config: report.config.clone(),
        wall_time_s: report.wall_time.as_secs_f64(),
        threads: rayon::current_num_threads(),
        passed: report.passed(),
        files,
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_config;

    #[test]
    fn empty_report_files() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_report(&ExperimentReport::new("empty"), dir.path()).unwrap();
        assert_eq!(m.files, vec!["report.json"]);
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
        assert_eq!(json["verdicts"], serde_json::json!([]));
        assert_eq!(json["tables"], serde_json::json!([]));
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["version"], crate::experiments::VERSION);
    }

    #[test]
    fn nonuniform_csv_schema_and_snapshots() {
        let cfg = parse_config(
            "experiment = \"nonuniform\"\n[grid]\nn = 32\n[snapshots]\nenabled = true\n[nonuniform]\nn_list = [4]\nprobes = [0.5]\n",
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m = write_report(&report, dir.path()).unwrap();
        let csv = fs::read_to_string(dir.path().join("separation.csv")).unwrap();
        assert_eq!(csv.lines().next(), Some("n,t,measured,closed_form,sin_t,data_sep"));
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(m.files.iter().filter(|f| f.starts_with("snapshots/")).count(), 4);
        assert_eq!(m.seed, Some(1));
    }
}
