use super::{bin_of, cumulate, thresholds, PairCorrResult, SGrid};
use crate::error::Result;
use crate::torus::{sup_dist, PointSet};

/// Exact pair counts by examining all `N(N-1)/2` unordered pairs.
///
/// Point sets with fewer than two points give zero counts.
pub fn pair_corr_bruteforce(pts: &PointSet, s_grid: &SGrid) -> Result<PairCorrResult> {
    let th = thresholds(pts, s_grid);
    let r_max = *th.last().expect("non-empty grid");
    let mut bins = vec![0u64; th.len()];
    let n = pts.len();
    for l in 0..n {
        let a = pts.point(l);
        for m in l + 1..n {
            let dist = sup_dist(a, pts.point(m));
            if dist <= r_max {
                bins[bin_of(&th, dist)] += 2;
            }
        }
    }
    Ok(PairCorrResult::from_counts(pts, s_grid, cumulate(bins)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paircorr::mean_spacing_inverse;

    fn grid(v: &[f64]) -> SGrid {
        SGrid::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identical_points() {
        let pts = PointSet::from_flat(1, vec![0.3, 0.3], "").unwrap();
        let r = pair_corr_bruteforce(&pts, &grid(&[0.1])).unwrap();
        assert_eq!(r.counts, vec![2]);
        assert_eq!(r.f_values, vec![1.0]);
    }

    #[test]
    fn far_points() {
        let pts = PointSet::from_flat(1, vec![0.0, 0.5], "").unwrap();
        let r = pair_corr_bruteforce(&pts, &grid(&[0.4])).unwrap();
        assert_eq!(r.counts, vec![0]);
        assert_eq!(r.f_values, vec![0.0]);
    }

    #[test]
    fn square_corners() {
        // all pairs at sup-distance exactly 0.1 in f64; threshold 0.2 / sqrt(4) = 0.1
        let pts = PointSet::from_flat(2, vec![0.1, 0.1, 0.2, 0.1, 0.1, 0.2, 0.2, 0.2], "").unwrap();
        let r = pair_corr_bruteforce(&pts, &grid(&[0.2])).unwrap();
        assert_eq!(r.counts, vec![12]);
        assert_eq!(r.f_values, vec![3.0]);
    }

    #[test]
    fn saturation_and_tiny_inputs() {
        let pts = crate::generators::gen_uniform_iid(3, 50, 5).unwrap();
        let s = 0.5 * mean_spacing_inverse(50, 3);
        let r = pair_corr_bruteforce(&pts, &grid(&[s])).unwrap();
        assert_eq!(r.counts, vec![50 * 49]);

        let one = PointSet::from_flat(2, vec![0.1, 0.1], "").unwrap();
        assert_eq!(pair_corr_bruteforce(&one, &grid(&[1.0])).unwrap().counts, vec![0]);
        let empty = PointSet::from_flat(2, vec![], "").unwrap();
        assert_eq!(pair_corr_bruteforce(&empty, &grid(&[1.0])).unwrap().counts, vec![0]);
    }

    #[test]
    fn zero_s_counts_coincident_pairs() {
        let pts = PointSet::from_flat(1, vec![0.2, 0.2, 0.2, 0.7], "").unwrap();
        let r = pair_corr_bruteforce(&pts, &grid(&[0.0, 0.1])).unwrap();
        assert_eq!(r.counts, vec![6, 6]);
    }
}
