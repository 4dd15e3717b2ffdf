use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::gen_uniform_iid_stream;
use crate::paircorr::{pair_corr_celllist, poisson_reference, SGrid};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// `E F_N(s) = (N-1)/N (2s)^d` for i.i.d. uniform points.
pub fn expectation_formula(n: usize, s: f64, d: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (n - 1) as f64 / n as f64 * poisson_reference(s, d)
}

/// `max(s^d, s^(2d-1))`, the `s`-dependence of the variance of `F_N(s)`.
pub fn variance_scale(s: f64, d: usize) -> f64 {
    s.powi(d as i32).max(s.powi(2 * d as i32 - 1))
}

/// Chebyshev bound `c max(s^d, s^(2d-1)) / (eps^2 N)` on
/// `P(|F_N(s) - (2s)^d| >= eps)`, with the dimension-dependent constant `c`
/// supplied by the caller.
pub fn chebyshev_bound(n: usize, s: f64, d: usize, eps: f64, c: f64) -> Result<f64> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("N and d must be positive"));
    }
    positive("s", s)?;
    positive("eps", eps)?;
    positive("c", c)?;
    Ok(c * variance_scale(s, d) / (eps * eps * n as f64))
}

/// The `eps` at which [`chebyshev_bound`] equals `delta`, i.e. the half-width
/// of the envelope holding with probability at least `1 - delta`.
pub fn chebyshev_epsilon(n: usize, s: f64, d: usize, c: f64, delta: f64) -> Result<f64> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("N and d must be positive"));
    }
    positive("s", s)?;
    positive("c", c)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0,1), got {delta}")));
    }
    Ok((c * variance_scale(s, d) / (delta * n as f64)).sqrt())
}

/// The constant `c` that makes `c max(s^d, s^(2d-1)) / N` equal an observed
/// variance.
pub fn calibrate_chebyshev_constant(variance: f64, n: usize, s: f64, d: usize) -> f64 {
    variance * n as f64 / variance_scale(s, d)
}

/// Sample mean and unbiased sample variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloMoments {
    pub mean: f64,
    pub variance: f64,
    pub trials: usize,
}

impl MonteCarloMoments {
    pub fn from_samples(samples: &[f64]) -> Self {
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let variance = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            variance,
            trials: samples.len(),
        }
    }

    /// `sqrt(variance / trials)`.
    pub fn standard_error(&self) -> f64 {
        (self.variance / self.trials as f64).sqrt()
    }
}

/// `F_N(s)` for every `s` of the grid over `trials` independent uniform
/// samples; trial `t` draws from ChaCha stream `t` of `seed`.
///
/// Output is indexed `[trial][s]` and does not depend on the thread count.
pub fn pair_corr_trials(
    d: usize,
    n: usize,
    s_grid: &SGrid,
    trials: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let pts = gen_uniform_iid_stream(d, n, seed, t)?;
            Ok(pair_corr_celllist(&pts, s_grid)?.f_values)
        })
        .collect()
}

/// Empirical mean and variance of `F_N(s)` over independent uniform samples.
pub fn variance_monte_carlo(
    d: usize,
    n: usize,
    s: f64,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloMoments> {
    if trials < 2 {
        return Err(Error::invalid("at least two trials are needed for a variance"));
    }
    let grid = SGrid::new(vec![s])?;
    let samples: Vec<f64> = pair_corr_trials(d, n, &grid, trials, seed)?
        .into_iter()
        .map(|f| f[0])
        .collect();
    Ok(MonteCarloMoments::from_samples(&samples))
}
