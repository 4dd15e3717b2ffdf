//! Torus geometry: fractional parts, nearest-integer distance and the
//! sup-norm distance on `[0,1)^d`, plus the point containers used everywhere
//! else in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `f64` strictly below one.
pub(crate) const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
///
/// Negative inputs follow the floor convention, so `frac(-0.25) == 0.75`.
pub fn frac(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("frac of non-finite value {x}")));
    }
    Ok(frac_unchecked(x))
}

#[inline]
pub(crate) fn frac_unchecked(x: f64) -> f64 {
    let r = x - x.floor();
    // tiny negative x rounds up to exactly 1.0
    if r >= 1.0 {
        ONE_MINUS_ULP
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn dist_to_nearest_int(x: f64) -> Result<f64> {
    let f = frac(x)?;
    Ok(f.min(1.0 - f))
}

/// Nearest-integer distance of `a - b` for `a, b` in `[0,1)`.
///
/// Uses `|a - b|` so the result is bitwise symmetric in its arguments.
#[inline]
pub(crate) fn coord_dist(a: f64, b: f64) -> f64 {
    let t = (a - b).abs();
    t.min(1.0 - t)
}

/// Sup-norm torus distance between two coordinate slices of equal length.
#[inline]
pub(crate) fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (&x, &y)| acc.max(coord_dist(x, y)))
}

/// A point of `[0,1)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a torus point needs at least one coordinate"));
        }
        if let Some(c) = coords.iter().find(|c| !in_unit_interval(**c)) {
            return Err(Error::invalid(format!("coordinate {c} is outside [0,1)")));
        }
        Ok(Self { coords })
    }

    /// Reduces arbitrary finite coordinates modulo one.
    pub fn wrapped(coords: &[f64]) -> Result<Self> {
        let coords = coords.iter().map(|&c| frac(c)).collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[inline]
fn in_unit_interval(c: f64) -> bool {
    (0.0..1.0).contains(&c)
}

/// `max_i ||a_i - b_i||` on the torus.
pub fn sup_torus_dist(a: &TorusPoint, b: &TorusPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(sup_dist(&a.coords, &b.coords))
}

/// An ordered, immutable sequence of points sharing one dimension.
///
/// Coordinates are stored row-major in a single buffer; point `n` occupies
/// `coords[n * dim..(n + 1) * dim]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    label: String,
}

impl PointSet {
    /// Builds a point set from a flat row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !in_unit_interval(*c)) {
            return Err(Error::invalid(format!(
                "point {} has coordinate {} outside [0,1)",
                i / dim + 1,
                coords[i]
            )));
        }
        Ok(Self {
            dim,
            coords,
            label: label.into(),
        })
    }

    pub fn from_points(dim: usize, points: &[TorusPoint], label: impl Into<String>) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::invalid(format!(
                    "point {} has dimension {}, expected {dim}",
                    i + 1,
                    p.dim()
                )));
            }
            coords.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, coords, label)
    }

    /// Constructor for generators that already guarantee the range invariant.
    pub(crate) fn from_flat_trusted(dim: usize, coords: Vec<f64>, label: String) -> Self {
        debug_assert!(dim > 0 && coords.len().is_multiple_of(dim));
        debug_assert!(coords.iter().all(|c| in_unit_interval(*c)));
        Self { dim, coords, label }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    /// Coordinates of point `n` (0-based).
    pub fn point(&self, n: usize) -> &[f64] {
        &self.coords[n * self.dim..(n + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_points(&self) -> Vec<TorusPoint> {
        self.iter()
            .map(|c| TorusPoint { coords: c.to_vec() })
            .collect()
    }

    /// The first `n` points (all of them if `n >= len`).
    pub fn prefix(&self, n: usize) -> PointSet {
        let n = n.min(self.len());
        Self {
            dim: self.dim,
            coords: self.coords[..n * self.dim].to_vec(),
            label: self.label.clone(),
        }
    }

    /// Every point shifted by `t` modulo one.
    pub fn translated(&self, t: &[f64]) -> Result<PointSet> {
        if t.len() != self.dim {
            return Err(Error::invalid("translation vector has the wrong dimension"));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            for (c, s) in p.iter().zip(t) {
                coords.push(frac(c + s)?);
            }
        }
        Ok(Self::from_flat_trusted(self.dim, coords, self.label.clone()))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
