use rayon::prelude::*;

use super::{bin_of, cumulate, thresholds, PairCorrResult, SGrid};
use crate::error::Result;
use crate::torus::{sup_dist, PointSet};

/// Absolute slack added to the largest radius before choosing the cell side,
/// so points rounded onto a cell boundary can never hide a pair two cells away.
const RADIUS_PAD: f64 = 1e-12;

/// Cells per axis for a given largest radius.
///
/// `M = floor(1 / r)` keeps the cell side at least `r`, so every pair within
/// `r` lies in the same or an adjacent cell (with wrap-around). The total
/// number of cells is capped near `4N` to keep memory linear in `N`; larger
/// cells are still correct.
pub fn cell_grid_side(n: usize, dim: usize, r_max: f64) -> usize {
    let padded = r_max * (1.0 + 1e-6) + RADIUS_PAD;
    let by_radius = (1.0 / padded).floor();
    let by_memory = ((4 * n.max(1)) as f64).powf(1.0 / dim as f64).floor();
    by_radius.min(by_memory).max(1.0) as usize
}

struct CellList {
    dim: usize,
    side: usize,
    /// `starts[c]..starts[c + 1]` indexes the points of cell `c` in `coords`.
    starts: Vec<usize>,
    /// Coordinates reordered by cell.
    coords: Vec<f64>,
}

impl CellList {
    fn build(pts: &PointSet, side: usize) -> Self {
        let dim = pts.dim();
        let n = pts.len();
        let ncells = side.pow(dim as u32);
        let cell_of: Vec<usize> = pts.iter().map(|p| linear_cell(p, side)).collect();

        let mut starts = vec![0usize; ncells + 1];
        for &c in &cell_of {
            starts[c + 1] += 1;
        }
        for c in 0..ncells {
            starts[c + 1] += starts[c];
        }
        let mut cursor = starts[..ncells].to_vec();
        let mut coords = vec![0.0; n * dim];
        for (i, &c) in cell_of.iter().enumerate() {
            let slot = cursor[c];
            cursor[c] += 1;
            coords[slot * dim..(slot + 1) * dim].copy_from_slice(pts.point(i));
        }
        Self {
            dim,
            side,
            starts,
            coords,
        }
    }

    fn ncells(&self) -> usize {
        self.starts.len() - 1
    }

    #[inline]
    fn point(&self, slot: usize) -> &[f64] {
        &self.coords[slot * self.dim..(slot + 1) * self.dim]
    }

    /// Linear indices of the cells adjacent to `cell` (itself included) that
    /// are `>= cell`, without duplicates.
    fn forward_neighbors(&self, cell: usize, out: &mut Vec<usize>) {
        out.clear();
        out.push(0);
        let mut rest = cell;
        let mut stride = 1;
        for _ in 0..self.dim {
            let c = rest % self.side;
            rest /= self.side;
            let axis_buf = if self.side <= 3 {
                [0, 1, 2]
            } else {
                [(c + self.side - 1) % self.side, c, (c + 1) % self.side]
            };
            let axis = &axis_buf[..self.side.min(3)];
            let prev = out.len();
            for i in 0..prev {
                let base = out[i];
                for &a in axis {
                    out.push(base + a * stride);
                }
            }
            out.drain(..prev);
            stride *= self.side;
        }
        out.retain(|&c| c >= cell);
    }
}

#[inline]
fn linear_cell(p: &[f64], side: usize) -> usize {
    let mut idx = 0;
    for &x in p.iter().rev() {
        let c = ((x * side as f64) as usize).min(side - 1);
        idx = idx * side + c;
    }
    idx
}

/// Same counts as [`pair_corr_bruteforce`](super::pair_corr_bruteforce),
/// computed with a cell list.
///
/// Cells are processed in parallel on the current rayon pool; per-thread
/// tallies are summed, so the result does not depend on scheduling.
pub fn pair_corr_celllist(pts: &PointSet, s_grid: &SGrid) -> Result<PairCorrResult> {
    let th = thresholds(pts, s_grid);
    let nbins = th.len();
    if pts.len() < 2 {
        return Ok(PairCorrResult::from_counts(pts, s_grid, vec![0; nbins]));
    }
    let r_max = *th.last().expect("non-empty grid");
    let side = cell_grid_side(pts.len(), pts.dim(), r_max);
    let cells = CellList::build(pts, side);

    let bins = (0..cells.ncells())
        .into_par_iter()
        .with_min_len(512)
        .fold(
            || (vec![0u64; nbins], Vec::with_capacity(3usize.pow(pts.dim() as u32))),
            |(mut bins, mut nbrs), cell| {
                let (lo, hi) = (cells.starts[cell], cells.starts[cell + 1]);
                if lo == hi {
                    return (bins, nbrs);
                }
                cells.forward_neighbors(cell, &mut nbrs);
                for &other in &nbrs {
                    let (olo, ohi) = (cells.starts[other], cells.starts[other + 1]);
                    for p in lo..hi {
                        let a = cells.point(p);
                        // within the home cell only later slots; other cells
                        // come after this one so all their slots are later
                        let first = if other == cell { p + 1 } else { olo };
                        for q in first..ohi {
                            let dist = sup_dist(a, cells.point(q));
                            if dist <= r_max {
                                bins[bin_of(&th, dist)] += 2;
                            }
                        }
                    }
                }
                (bins, nbrs)
            },
        )
        .map(|(bins, _)| bins)
        .reduce(
            || vec![0u64; nbins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(PairCorrResult::from_counts(pts, s_grid, cumulate(bins)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_uniform_iid;
    use crate::paircorr::pair_corr_bruteforce;

    fn grid(v: &[f64]) -> SGrid {
        SGrid::new(v.to_vec()).unwrap()
    }

    #[test]
    fn neighbors_wrap_and_dedupe() {
        let pts = PointSet::from_flat(2, vec![0.5, 0.5], "").unwrap();
        let mut out = Vec::new();
        for side in 1..6 {
            let cl = CellList::build(&pts, side);
            cl.forward_neighbors(0, &mut out);
            let mut sorted = out.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), out.len());
            assert_eq!(out.len(), side.min(3).pow(2));
        }
        let cl = CellList::build(&pts, 5);
        // cell (4, 4) wraps to (0,0), (3,3) ... ; only itself is >= 24
        cl.forward_neighbors(24, &mut out);
        assert_eq!(out, vec![24]);
    }

    #[test]
    fn grid_side_rules() {
        assert_eq!(cell_grid_side(1_000_000, 2, 1e-3), 999);
        assert_eq!(cell_grid_side(10, 2, 0.6), 1);
        // memory cap
        assert_eq!(cell_grid_side(10, 1, 1e-6), 40);
        assert_eq!(cell_grid_side(10, 2, 0.0), 6);
    }

    #[test]
    fn single_point_and_wraparound() {
        let one = PointSet::from_flat(1, vec![0.4], "").unwrap();
        assert_eq!(pair_corr_celllist(&one, &grid(&[3.0])).unwrap().counts, vec![0]);
        // pair across the 0/1 boundary
        let pts = PointSet::from_flat(1, vec![0.001, 0.999, 0.5, 0.25], "").unwrap();
        let g = grid(&[0.005, 0.01, 2.0]);
        let a = pair_corr_celllist(&pts, &g).unwrap();
        assert_eq!(a, pair_corr_bruteforce(&pts, &g).unwrap());
        assert_eq!(a.counts[1], 2);
    }

    #[test]
    fn matches_bruteforce_on_uniform() {
        for d in 1..=4 {
            let pts = gen_uniform_iid(d, 700, d as u64).unwrap();
            let g = grid(&[0.1, 0.5, 1.0, 1.7]);
            assert_eq!(
                pair_corr_celllist(&pts, &g).unwrap(),
                pair_corr_bruteforce(&pts, &g).unwrap()
            );
        }
    }

    #[test]
    fn large_uniform_sample_near_four() {
        let pts = gen_uniform_iid(2, 100_000, 3).unwrap();
        let r = pair_corr_celllist(&pts, &grid(&[1.0])).unwrap();
        assert!((r.f_values[0] - 4.0).abs() < 0.2, "F = {}", r.f_values[0]);
    }
}
