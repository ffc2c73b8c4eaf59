use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn logeuler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logeuler"))
        .args(args)
        .output()
        .unwrap()
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn shipped_configs_validate() {
    let mut count = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let out = logeuler(&["validate", "--config", path.to_str().unwrap()]);
            assert!(
                out.status.success(),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            count += 1;
        }
    }
    assert_eq!(count, 5);
}

#[test]
fn version_prints() {
    let out = logeuler(&["version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("logeuler "));
}

#[test]
fn config_errors_exit_2_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.toml", "experiment = \"continuity\"\n[grid]\nn = 63\n");
    let out = logeuler(&["validate", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));

    let unknown = write(
        &dir,
        "unknown.toml",
        "experiment = \"continuity\"\n[solver]\nclf = 0.4\n",
    );
    let out = logeuler(&["run", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver"));
}

#[test]
fn missing_config_exits_4() {
    let out = logeuler(&["validate", "--config", "/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn small_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "nu.toml",
        "experiment = \"nonuniform\"\n[grid]\nn = 32\n[nonuniform]\nn_list = [4, 8]\nprobes = [0.5, 1.0]\n",
    );
    let out_dir = dir.path().join("out");
    let out = logeuler(&[
        "run",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "manifest.json", "separation.csv", "deficit.csv"] {
        assert!(out_dir.join(f).is_file(), "missing {f}");
    }
    let manifest: String = fs::read_to_string(out_dir.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"threads\": 2"));
}

#[test]
fn verdict_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // An absurdly small envelope constant must be reported as a failed verdict.
    let cfg = write(
        &dir,
        "gc.toml",
        "experiment = \"gamma_comparison\"\n[grid]\nn = 32\n[solver]\nt_end = 0.2\n[gamma_comparison]\ngamma_list = [0.02, 0.01]\nrecords = 4\nc0 = 1e-30\n",
    );
    let out_dir = dir.path().join("out");
    let out = logeuler(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL envelope"));
}
