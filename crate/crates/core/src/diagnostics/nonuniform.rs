//! Lower bound on `F_N(s)` for a sequence that misses the volume of an
//! anchored box by `eps`.
//!
//! Binning `[0,1)^2` into `N` squares of side `N^(-1/2)` and minimising the
//! resulting quadratic form gives `F_N(s) >= R(s)` with
//! `R(s) = (4s(s-1) + 1) (λ(1 - ε/λ)^2 + (1-λ)(1 + ε/(1-λ))^2) - 1`, where
//! `λ` is the box volume. `R(s) - 4s^2` grows like `4ε²/(λ(1-λ)) s^2`, so a
//! sequence with Poissonian limits at every integer `s` cannot be
//! non-uniform.

use crate::error::{Error, Result};

fn check_params(eps: f64, lam: f64) -> Result<()> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::invalid(format!("lambda must lie in (0,1), got {lam}")));
    }
    if !(eps >= 0.0 && eps < lam && eps < 1.0 - lam) {
        return Err(Error::invalid(format!(
            "eps must satisfy 0 <= eps < min(lambda, 1 - lambda), got eps = {eps}, lambda = {lam}"
        )));
    }
    Ok(())
}

/// `λ(1 - ε/λ)^2 + (1-λ)(1 + ε/(1-λ))^2`: mean squared bin density.
fn density_factor(eps: f64, lam: f64) -> f64 {
    lam * (1.0 - eps / lam).powi(2) + (1.0 - lam) * (1.0 + eps / (1.0 - lam)).powi(2)
}

/// `R(s)` for integer `s >= 1`.
///
/// `eps = 0` is accepted (the uniform case, where `R(s) < 4s^2`).
pub fn nonuniform_lower_bound(eps: f64, lam: f64, s: u64) -> Result<f64> {
    check_params(eps, lam)?;
    if s == 0 {
        return Err(Error::invalid("s must be a positive integer"));
    }
    let sf = s as f64;
    Ok((4.0 * sf * (sf - 1.0) + 1.0) * density_factor(eps, lam) - 1.0)
}

/// Leading coefficient of `R(s) - 4s^2` as a polynomial in `s`, computed from
/// the bin densities: `4 (λ(1-ε/λ)^2 + (1-λ)(1+ε/(1-λ))^2) - 4`.
/// Algebraically this is `4ε²/(λ(1-λ))`.
pub fn nonuniform_leading_coeff(eps: f64, lam: f64) -> Result<f64> {
    check_params(eps, lam)?;
    Ok(4.0 * density_factor(eps, lam) - 4.0)
}

/// Smallest positive integer `s` with `R(s) > 4s^2`.
///
/// Starts just below the larger root of `4k s^2 - 4(1+k) s + k`,
/// `k = ε²/(λ(1-λ))`, then walks to the first crossing of the directly
/// evaluated inequality, so the answer is consistent with
/// [`nonuniform_lower_bound`] pointwise.
pub fn min_contradicting_s(eps: f64, lam: f64) -> Result<u64> {
    check_params(eps, lam)?;
    if eps == 0.0 {
        return Err(Error::invalid("eps = 0 never contradicts the Poissonian limit"));
    }
    let k = eps * eps / (lam * (1.0 - lam));
    let root = ((1.0 + k) + (1.0 + 2.0 * k).sqrt()) / (2.0 * k);
    if root.is_nan() || root >= 2f64.powi(52) {
        return Err(Error::Range(format!(
            "first crossing near s = {root:e} is beyond exact integer range"
        )));
    }
    let exceeds = |s: u64| -> bool {
        let sf = s as f64;
        let r = (4.0 * sf * (sf - 1.0) + 1.0) * density_factor(eps, lam) - 1.0;
        r > 4.0 * sf * sf
    };
    let mut s = (root.floor() as u64).saturating_sub(2).max(1);
    while !exceeds(s) {
        s += 1;
    }
    while s > 1 && exceeds(s - 1) {
        s -= 1;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Linear scan from `s = 1`.
    fn scan(eps: f64, lam: f64) -> u64 {
        let mut s = 1;
        while nonuniform_lower_bound(eps, lam, s).unwrap() <= 4.0 * (s * s) as f64 {
            s += 1;
        }
        s
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(nonuniform_lower_bound(0.0, 0.5, 3).unwrap(), 24.0);
        let r1 = nonuniform_lower_bound(0.1, 0.25, 1).unwrap();
        assert!((r1 - 0.01 / 0.1875).abs() < 1e-12);
        assert!(r1 < 4.0);
        assert!(nonuniform_lower_bound(0.3, 0.25, 1).is_err());
        assert!(nonuniform_lower_bound(0.1, 0.95, 1).is_err());
        assert!(nonuniform_lower_bound(0.1, 0.5, 0).is_err());
        assert!(nonuniform_lower_bound(-0.1, 0.5, 2).is_err());
    }

    #[test]
    fn leading_coeff_examples() {
        assert!((nonuniform_leading_coeff(0.1, 0.5).unwrap() - 0.16).abs() < 1e-12);
        let v = nonuniform_leading_coeff(0.01, 0.9).unwrap();
        assert!((v - 4e-4 / 0.09).abs() < 1e-12);
        assert!(nonuniform_leading_coeff(0.0, 0.3).unwrap().abs() < 1e-15);
        assert!((nonuniform_leading_coeff(0.1, 0.25).unwrap() - 0.04 / 0.1875).abs() < 1e-12);
    }

    #[test]
    fn crossing_examples() {
        // frozen from a linear scan of R(s) against 4 s^2
        assert_eq!(min_contradicting_s(0.1, 0.25).unwrap(), 20);
        assert_eq!(min_contradicting_s(0.2, 0.5).unwrap(), 8);
        assert_eq!(min_contradicting_s(0.4, 0.5).unwrap(), 3);
        assert_eq!(min_contradicting_s(0.01, 0.9).unwrap(), 901);
        assert_eq!(min_contradicting_s(0.05, 0.3).unwrap(), 85);
        assert!(min_contradicting_s(0.0, 0.5).is_err());
        assert!(matches!(min_contradicting_s(1e-9, 0.5), Err(Error::Range(_))));
    }

    proptest! {
        #[test]
        fn crossing_matches_scan(lam in 0.05..0.95f64, frac in 0.05..0.99f64) {
            let eps = frac * lam.min(1.0 - lam);
            prop_assert_eq!(min_contradicting_s(eps, lam).unwrap(), scan(eps, lam));
        }

        #[test]
        fn shrinking_eps_never_lowers_crossing(lam in 0.05..0.95f64, a in 0.02..0.99f64, b in 0.02..0.99f64) {
            let m = lam.min(1.0 - lam);
            let (lo, hi) = if a < b { (a * m, b * m) } else { (b * m, a * m) };
            prop_assert!(min_contradicting_s(lo, lam).unwrap() >= min_contradicting_s(hi, lam).unwrap());
        }
    }
}
