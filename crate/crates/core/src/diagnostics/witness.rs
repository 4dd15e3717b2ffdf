//! Constructive failure of the Poissonian property for two-dimensional
//! Kronecker sequences.
//!
//! A good simultaneous approximation `q` (both `||q α_i||` below
//! `θ / sqrt(q)` with `θ < 1`) fixes integers `A`, `L` and a sample size `N`
//! for which every pair `(x_k, x_{k+qL})` sits at the same sup-distance
//! `Lθ/sqrt(q)`, and that distance lies between `1/sqrt(N)` and `3/sqrt(N)`.
//! At least `N - qL >= γN` pairs therefore pile up at one scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{frac_mul, gen_kronecker, AlphaVector};
use crate::torus::sup_dist;

/// Lag pairs count as sharing the witness distance within this tolerance.
pub const LAG_DIST_TOL: f64 = 1e-9;

/// Upper limit for the search over `A`.
const MAX_A: u64 = 1_000_000;

/// A denominator `q` with `sqrt(q) max_i ||q α_i|| = θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxHit {
    pub q: u64,
    pub theta: f64,
}

fn max_nearest_int(q: u64, alpha: &AlphaVector) -> f64 {
    alpha
        .values()
        .iter()
        .map(|&a| {
            let f = frac_mul(q, a);
            f.min(1.0 - f)
        })
        .fold(0.0, f64::max)
}

/// All `q <= q_max` with `0 < sqrt(q) max_i ||q α_i|| < rho`, in increasing `q`.
///
/// `θ = 0` (exact rational hits) is skipped since the construction divides by
/// it.
pub fn simultaneous_approx_search(alpha: &AlphaVector, q_max: u64, rho: f64) -> Result<Vec<ApproxHit>> {
    if q_max == 0 {
        return Err(Error::invalid("q_max must be at least 1"));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be positive, got {rho}")));
    }
    Ok((1..=q_max)
        .filter_map(|q| {
            let theta = (q as f64).sqrt() * max_nearest_int(q, alpha);
            (theta > 0.0 && theta < rho).then_some(ApproxHit { q, theta })
        })
        .collect())
}

/// Hit with the smallest `θ` (earliest `q` on ties).
pub fn best_approximation(hits: &[ApproxHit]) -> Option<ApproxHit> {
    hits.iter()
        .copied()
        .min_by(|a, b| a.theta.total_cmp(&b.theta).then(a.q.cmp(&b.q)))
}

/// Smallest integer `A >= 1` with `((1/(Aθ))^(2/3) + 1)^3 θ^2 < (1 + θ^2)/2`.
pub fn minimal_a(theta: f64) -> Result<u64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::invalid(format!("theta must lie in (0,1), got {theta}")));
    }
    let target = (1.0 + theta * theta) / 2.0;
    (1..=MAX_A)
        .find(|&a| {
            let inner = (1.0 / (a as f64 * theta)).powf(2.0 / 3.0) + 1.0;
            inner.powi(3) * theta * theta < target
        })
        .ok_or_else(|| Error::Range(format!("no A <= {MAX_A} satisfies the condition for theta = {theta}")))
}

/// The full record of one witness construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerWitness {
    pub alpha: Vec<f64>,
    pub q: u64,
    pub theta: f64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "L")]
    pub l: u64,
    pub nu_tilde: f64,
    #[serde(rename = "N")]
    pub n: u64,
    /// `q L`.
    pub lag: u64,
    /// `L max_i ||q α_i|| = Lθ/sqrt(q)`.
    pub lag_distance: f64,
    /// Pairs `(x_k, x_{k+lag})`, `k = 1..N-lag`, within [`LAG_DIST_TOL`] of `lag_distance`.
    pub pair_count_at_lag: u64,
    /// Largest observed `| ||x_k - x_{k+lag}||_inf - lag_distance |`.
    pub max_lag_deviation: f64,
    pub rho: f64,
    /// `(2/(1+ρ²) - 1) / A_ρ²`; zero when `ρ >= 1`.
    pub gamma_bound: f64,
    /// `1/sqrt(N)`.
    pub sandwich_lo: f64,
    /// `3/sqrt(N)`.
    pub sandwich_hi: f64,
    pub b_gt_one: bool,
    pub n_ge_blq: bool,
    pub sandwich_ok: bool,
    pub all_lag_pairs_match: bool,
    pub excess_ge_gamma_n: bool,
}

impl KroneckerWitness {
    /// True when every structural check held.
    pub fn is_valid(&self) -> bool {
        self.b_gt_one && self.n_ge_blq && self.sandwich_ok && self.all_lag_pairs_match
    }

    /// `N - qL`, the number of lag pairs.
    pub fn lag_pairs(&self) -> u64 {
        self.n - self.lag
    }
}

/// Builds the witness for approximation `q` with quality `theta` and counts
/// the lag pairs on the generated sequence.
///
/// `theta` must match `sqrt(q) max_i ||q α_i||` (to `1e-9` relative). Checks
/// that fail because `f64` only approximates the ideal irrational setting are
/// reported as `false` flags rather than errors.
pub fn kronecker_witness(alpha: &AlphaVector, q: u64, theta: f64, rho: f64) -> Result<KroneckerWitness> {
    if alpha.dim() != 2 {
        return Err(Error::invalid(format!(
            "witness construction is two-dimensional, got d = {}",
            alpha.dim()
        )));
    }
    if q == 0 {
        return Err(Error::invalid("q must be at least 1"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::invalid(format!("theta must lie in (0,1), got {theta}")));
    }
    let step = max_nearest_int(q, alpha);
    let actual = (q as f64).sqrt() * step;
    if (actual - theta).abs() > 1e-9 * theta.max(actual) {
        return Err(Error::invalid(format!(
            "theta = {theta} does not match sqrt(q) max ||q alpha|| = {actual} for q = {q}"
        )));
    }
    let theta = actual;

    let a = minimal_a(theta)?;
    let b = 2.0 / (1.0 + theta * theta);
    let l = (1.0 / (a as f64 * theta)).powf(2.0 / 3.0).ceil() as u64;
    let overflow = || Error::Range("A^2 L q overflows".into());
    let a2lq = a
        .checked_mul(a)
        .and_then(|v| v.checked_mul(l))
        .and_then(|v| v.checked_mul(q))
        .ok_or_else(overflow)?;
    let (lf, qf) = (l as f64, q as f64);
    let nu_tilde = a2lq as f64 - qf / (lf * lf * theta * theta);
    let nu = nu_tilde.floor();
    let n_signed = a2lq as f64 - nu;
    if !(n_signed >= 1.0 && n_signed < 2f64.powi(40)) {
        return Err(Error::Range(format!("witness sample size {n_signed} is out of range")));
    }
    let n = n_signed as u64;
    let lag = q.checked_mul(l).ok_or_else(overflow)?;
    let lag_distance = lf * step;

    let (pair_count_at_lag, max_lag_deviation) = if lag < n {
        let pts = gen_kronecker(alpha, n as usize)?;
        let lag = lag as usize;
        (0..n as usize - lag).fold((0u64, 0.0f64), |(count, worst), k| {
            let dev = (sup_dist(pts.point(k), pts.point(k + lag)) - lag_distance).abs();
            (count + u64::from(dev <= LAG_DIST_TOL), worst.max(dev))
        })
    } else {
        (0, 0.0)
    };

    let gamma_bound = if rho < 1.0 {
        let a_rho = minimal_a(rho)? as f64;
        (2.0 / (1.0 + rho * rho) - 1.0) / (a_rho * a_rho)
    } else {
        0.0
    };
    let nf = n as f64;
    let sandwich_lo = 1.0 / nf.sqrt();
    let sandwich_hi = 3.0 / nf.sqrt();
    let lag_pairs = n.saturating_sub(lag);

    Ok(KroneckerWitness {
        alpha: alpha.values().to_vec(),
        q,
        theta,
        a,
        b,
        l,
        nu_tilde,
        n,
        lag,
        lag_distance,
        pair_count_at_lag,
        max_lag_deviation,
        rho,
        gamma_bound,
        sandwich_lo,
        sandwich_hi,
        b_gt_one: b > 1.0,
        n_ge_blq: nf >= b * lf * qf,
        sandwich_ok: sandwich_lo <= lag_distance && lag_distance <= sandwich_hi,
        all_lag_pairs_match: lag < n && pair_count_at_lag == lag_pairs,
        excess_ge_gamma_n: lag_pairs as f64 >= gamma_bound * nf,
    })
}
