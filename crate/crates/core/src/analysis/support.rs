use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{Grid2D, RealField};

/// One connected component of the thresholded support.
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    /// Flat grid indices, ascending.
    #[serde(skip)]
    pub cells: Vec<usize>,
    /// `[[x1_min, x1_max], [x2_min, x2_max]]` in unwrapped coordinates.
    pub bbox: [[f64; 2]; 2],
    pub area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportSummary {
    pub components: Vec<Component>,
    /// Smallest torus distance between cells of two different components.
    pub min_distance: Option<f64>,
}

impl SupportSummary {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Periodic distance between the centres of two cells.
pub fn torus_distance(grid: &Grid2D, a: usize, b: usize) -> f64 {
    let n = grid.n() as i64;
    let wrap = |d: i64| {
        let d = d.rem_euclid(n);
        d.min(n - d)
    };
    let di = wrap((a / grid.n()) as i64 - (b / grid.n()) as i64);
    let dj = wrap((a % grid.n()) as i64 - (b % grid.n()) as i64);
    grid.dx() * ((di * di + dj * dj) as f64).sqrt()
}

/// Cells of `cells` with at least one 4-neighbour outside the set.
pub(crate) fn boundary_cells(grid: &Grid2D, cells: &[usize], member: &[bool]) -> Vec<usize> {
    cells
        .iter()
        .copied()
        .filter(|&idx| neighbours(grid, idx).iter().any(|&nb| !member[nb]))
        .collect()
}

fn neighbours(grid: &Grid2D, idx: usize) -> [usize; 4] {
    let n = grid.n();
    let (i, j) = (idx / n, idx % n);
    [
        ((i + 1) % n) * n + j,
        ((i + n - 1) % n) * n + j,
        i * n + (j + 1) % n,
        i * n + (j + n - 1) % n,
    ]
}

/// Minimum torus distance between two cell sets (compared via boundary cells).
pub fn set_distance(grid: &Grid2D, a: &[usize], b: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for &x in a {
        for &y in b {
            best = best.min(torus_distance(grid, x, y));
        }
    }
    best
}

/// Connected components of `{|f| > threshold_rel · ‖f‖_∞}` under periodic
/// 4-adjacency, with bounding boxes, areas and the minimal pairwise distance.
pub fn support_summary(f: &RealField, threshold_rel: f64) -> Result<SupportSummary> {
    if !(threshold_rel > 0.0 && threshold_rel < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in (0, 1), got {threshold_rel}"
        )));
    }
    let grid = f.grid();
    let n = grid.n();
    let sup = f.samples().iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if sup == 0.0 {
        return Ok(SupportSummary {
            components: Vec::new(),
            min_distance: None,
        });
    }
    let level = threshold_rel * sup;
    let member: Vec<bool> = f.samples().iter().map(|v| v.abs() > level).collect();
    let mut label = vec![usize::MAX; member.len()];
    let mut components = Vec::new();
    let mut boundaries = Vec::new();
    let dx = grid.dx();

    for seed in 0..member.len() {
        if !member[seed] || label[seed] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut cells = Vec::new();
        // unwrapped integer coordinates so boxes survive wrap-around
        let mut queue = VecDeque::from([(seed, (seed / n) as i64, (seed % n) as i64)]);
        label[seed] = id;
        let (mut lo, mut hi) = ([i64::MAX; 2], [i64::MIN; 2]);
        while let Some((idx, ui, uj)) = queue.pop_front() {
            cells.push(idx);
            lo = [lo[0].min(ui), lo[1].min(uj)];
            hi = [hi[0].max(ui), hi[1].max(uj)];
            let steps = [(1, 0), (-1, 0), (0, 1), (0, -1)];
            for (nb, (di, dj)) in neighbours(grid, idx).into_iter().zip(steps) {
                if member[nb] && label[nb] == usize::MAX {
                    label[nb] = id;
                    queue.push_back((nb, ui + di, uj + dj));
                }
            }
        }
        cells.sort_unstable();
        boundaries.push(boundary_cells(grid, &cells, &member));
        components.push(Component {
            area: cells.len() as f64 * dx * dx,
            bbox: [
                [lo[0] as f64 * dx, hi[0] as f64 * dx],
                [lo[1] as f64 * dx, hi[1] as f64 * dx],
            ],
            cells,
        });
    }

    let mut min_distance: Option<f64> = None;
    for a in 0..boundaries.len() {
        for b in (a + 1)..boundaries.len() {
            let d = set_distance(grid, &boundaries[a], &boundaries[b]);
            min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
        }
    }
    Ok(SupportSummary {
        components,
        min_distance,
    })
}
