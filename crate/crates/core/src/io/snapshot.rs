use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{make_grid, RealField};

/// Sidecar stored next to a raw snapshot as `<path>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotMeta {
    pub n: usize,
    pub length: f64,
    pub time: f64,
    pub gamma: f64,
    pub kind: String,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes samples as little-endian `f64`, row-major (`x₂` fastest), plus the sidecar.
pub fn write_snapshot(field: &RealField, time: f64, gamma: f64, kind: &str, path: &Path) -> Result<()> {
    let bytes: Vec<u8> = field.samples().iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(path, bytes)?;
    let meta = SnapshotMeta {
        n: field.grid().n(),
        length: field.grid().length(),
        time,
        gamma,
        kind: kind.to_string(),
    };
    fs::write(sidecar(path), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(RealField, SnapshotMeta)> {
    let meta: SnapshotMeta = serde_json::from_str(&fs::read_to_string(sidecar(path))?)?;
    let bytes = fs::read(path)?;
    let expected = meta.n * meta.n * 8;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "{} holds {} bytes but the sidecar declares n = {} ({expected} bytes)",
            path.display(),
            bytes.len(),
            meta.n
        )));
    }
    let grid = make_grid(meta.n).map_err(|e| Error::Snapshot(e.to_string()))?;
    let samples = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((RealField::new(grid, samples)?, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{hm_exact_state, HMFamilySpec};
    use crate::spectral::to_physical;

    #[test]
    fn write_read_identity() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(32).unwrap();
        let spec = HMFamilySpec::new(8, 2.5, 1.0, 0.01).unwrap();
        let f = to_physical(&hm_exact_state(&spec, 0.0, &g).unwrap().theta_hat).unwrap();
        let path = dir.path().join("theta.f64");
        write_snapshot(&f, 0.0, 0.01, "vorticity", &path).unwrap();
        let (back, meta) = read_snapshot(&path).unwrap();
        assert_eq!(meta.n, 32);
        assert_eq!(meta.kind, "vorticity");
        assert!(back
            .samples()
            .iter()
            .zip(f.samples())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
        let max_err = back
            .samples()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - 8f64.powf(-1.5) * (8.0 * g.point(i).1).sin()).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-15);
    }

    #[test]
    fn sidecar_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(16).unwrap();
        let path = dir.path().join("f.f64");
        write_snapshot(&RealField::zeros(g), 0.5, 0.0, "vorticity", &path).unwrap();
        let side = sidecar(&path);
        let text = fs::read_to_string(&side).unwrap().replace("\"n\": 16", "\"n\": 32");
        fs::write(&side, text).unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Snapshot(_))));
    }
}
