use crate::error::{Error, Result};
use crate::torus::PointSet;

/// Grid resolution used by the CLI when none is given.
pub const DEFAULT_GRID_K: usize = 64;

/// Largest `K^d` histogram the grid estimator will allocate.
const MAX_GRID_CELLS: usize = 1 << 24;

/// Exact one-dimensional star discrepancy,
/// `max_i max(i/N - x_(i), x_(i) - (i-1)/N)` over the sorted points.
pub fn star_discrepancy_exact_1d(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::invalid("discrepancy needs at least one point"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max))
}

/// Star discrepancy over anchored boxes `[0, k_1/K) x ... x [0, k_d/K)`,
/// `k_i = 1..=K`.
///
/// In one dimension the exact value is returned instead. In higher
/// dimensions this is a lower estimate of the true star discrepancy, within
/// about `d/K` of it.
pub fn star_discrepancy_estimate(pts: &PointSet, grid_k: usize) -> Result<f64> {
    if pts.is_empty() {
        return Err(Error::invalid("discrepancy needs at least one point"));
    }
    if grid_k < 2 {
        return Err(Error::invalid(format!("grid K must be at least 2, got {grid_k}")));
    }
    let d = pts.dim();
    if d == 1 {
        return star_discrepancy_exact_1d(pts.flat());
    }
    let cells = (grid_k as u128).pow(d as u32);
    if cells > MAX_GRID_CELLS as u128 {
        return Err(Error::Range(format!(
            "grid of {grid_k}^{d} boxes exceeds the limit of {MAX_GRID_CELLS}"
        )));
    }
    if pts.len() > u32::MAX as usize {
        return Err(Error::Range("too many points for the grid estimator".into()));
    }
    let cells = cells as usize;
    let kf = grid_k as f64;

    // hist[idx] = points whose bin is idx, then prefix-summed along each axis
    // so hist[idx] = points with every bin index <= idx
    let mut hist = vec![0u32; cells];
    for p in pts.iter() {
        let mut idx = 0;
        for &x in p.iter().rev() {
            idx = idx * grid_k + ((x * kf) as usize).min(grid_k - 1);
        }
        hist[idx] += 1;
    }
    let mut stride = 1;
    for _ in 0..d {
        for idx in 0..cells {
            if (idx / stride) % grid_k != 0 {
                hist[idx] += hist[idx - stride];
            }
        }
        stride *= grid_k;
    }

    let n = pts.len() as f64;
    let mut worst = 0.0f64;
    for (idx, &count) in hist.iter().enumerate() {
        let mut vol = 1.0;
        let mut rest = idx;
        for _ in 0..d {
            vol *= ((rest % grid_k) + 1) as f64 / kf;
            rest /= grid_k;
        }
        worst = worst.max((count as f64 / n - vol).abs());
    }
    Ok(worst)
}
