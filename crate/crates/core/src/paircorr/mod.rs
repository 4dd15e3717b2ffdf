//! The pair correlation statistic
//! `F_N(s) = #{l != m : ||x_l - x_m||_inf <= s / N^(1/d)} / N`
//! on a grid of `s` values.
//!
//! Two engines compute it: [`pair_corr_bruteforce`] (all pairs, the oracle)
//! and [`pair_corr_celllist`] (cell list, the fast path). Both share the
//! distance function and the threshold binning, so their counts agree exactly.

mod bruteforce;
mod celllist;

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

pub use bruteforce::pair_corr_bruteforce;
pub use celllist::{cell_grid_side, pair_corr_celllist};

use crate::error::{Error, Result};
use crate::io::format_float;
use crate::torus::PointSet;

/// Strictly increasing, finite, non-negative `s` values.
///
/// `s = 0` is accepted and counts only exactly coincident pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SGrid {
    values: Vec<f64>,
}

impl SGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("s grid must not be empty"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!("s value {v} must be finite and >= 0")));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("s values must be strictly increasing"));
        }
        Ok(Self { values })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(f64::total_cmp);
        values.dedup();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty grid")
    }
}

impl TryFrom<Vec<f64>> for SGrid {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        SGrid::new(v)
    }
}

impl From<SGrid> for Vec<f64> {
    fn from(g: SGrid) -> Self {
        g.values
    }
}

/// Pair counts and normalized statistic for every `s` in a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub s_values: SGrid,
    /// Ordered pairs within the threshold; always even.
    pub counts: Vec<u64>,
    pub f_values: Vec<f64>,
    pub poisson_ref: Vec<f64>,
    #[serde(default)]
    pub label: String,
}

/// One CSV row of a [`PairCorrResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrRow {
    pub s: f64,
    pub count: u64,
    #[serde(rename = "F")]
    pub f: f64,
    pub poisson_ref: f64,
}

impl PairCorrResult {
    fn from_counts(pts: &PointSet, s_grid: &SGrid, counts: Vec<u64>) -> Self {
        let n = pts.len();
        let f_values = counts
            .iter()
            .map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 })
            .collect();
        let poisson_ref = s_grid
            .values()
            .iter()
            .map(|&s| poisson_reference(s, pts.dim()))
            .collect();
        Self {
            n,
            dim: pts.dim(),
            s_values: s_grid.clone(),
            counts,
            f_values,
            poisson_ref,
            label: pts.label().to_string(),
        }
    }

    pub fn rows(&self) -> Vec<PairCorrRow> {
        (0..self.counts.len())
            .map(|i| PairCorrRow {
                s: self.s_values.values()[i],
                count: self.counts[i],
                f: self.f_values[i],
                poisson_ref: self.poisson_ref[i],
            })
            .collect()
    }

    /// Writes `s,count,F,poisson_ref` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,count,F,poisson_ref")?;
        for r in self.rows() {
            writeln!(
                w,
                "{},{},{},{}",
                format_float(r.s),
                r.count,
                format_float(r.f),
                format_float(r.poisson_ref)
            )?;
        }
        Ok(())
    }

    /// Reads rows written by [`write_csv`](Self::write_csv); `#` lines are skipped.
    pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<PairCorrRow>> {
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        reader
            .deserialize()
            .enumerate()
            .map(|(i, row)| {
                row.map_err(|e| Error::Parse {
                    line: i + 2,
                    msg: e.to_string(),
                })
            })
            .collect()
    }
}

/// The Poissonian limit `(2s)^d`.
pub fn poisson_reference(s: f64, d: usize) -> f64 {
    debug_assert!(s >= 0.0);
    (2.0 * s).powi(d as i32)
}

/// `N^(1/d)`, the scale between `s` and the distance threshold.
///
/// Uses `sqrt` for `d = 2` so that `0.5 * root / root == 0.5` exactly.
pub fn mean_spacing_inverse(n: usize, d: usize) -> f64 {
    let nf = n as f64;
    match d {
        1 => nf,
        2 => nf.sqrt(),
        _ => nf.powf(1.0 / d as f64),
    }
}

/// Distance thresholds `s / N^(1/d)` in grid order, plus validation shared by
/// both engines.
fn thresholds(pts: &PointSet, s_grid: &SGrid) -> Vec<f64> {
    let root = mean_spacing_inverse(pts.len().max(1), pts.dim());
    s_grid.values().iter().map(|s| s / root).collect()
}

/// Index of the first threshold `>= dist`. Caller guarantees `dist <= last`.
#[inline]
fn bin_of(thresholds: &[f64], dist: f64) -> usize {
    thresholds.partition_point(|&r| r < dist)
}

/// Turns per-bin tallies into cumulative counts (`counts[i]` = pairs with
/// distance `<= thresholds[i]`).
fn cumulate(mut bins: Vec<u64>) -> Vec<u64> {
    let mut acc = 0;
    for b in bins.iter_mut() {
        acc += *b;
        *b = acc;
    }
    bins
}
