//! Sequence families on the torus: i.i.d. uniform points, Kronecker
//! sequences, `{a_n α}` over integer sequences, `{f(n) α}` for integer
//! polynomials, and Halton points for comparison.
//!
//! Fractional parts `{a α}` are evaluated exactly from the binary expansion of
//! the `f64` value of `α` (see [`frac_mul`]) and then rounded once, so results
//! do not drift with the index. Irrationality or rational independence of
//! `α` is not (and cannot be) checked on floats.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::torus::{PointSet, ONE_MINUS_ULP};

/// Strictly increasing non-negative integers `a_1 < a_2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSequence {
    terms: Vec<u64>,
    label: String,
}

impl IntegerSequence {
    pub fn new(terms: Vec<u64>, label: impl Into<String>) -> Result<Self> {
        if let Some(i) = terms.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Validation {
                line: i + 2,
                msg: format!(
                    "terms must be strictly increasing, got {} then {}",
                    terms[i],
                    terms[i + 1]
                ),
            });
        }
        Ok(Self {
            terms,
            label: label.into(),
        })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The first `n` terms, or an error naming the shortfall.
    pub fn prefix(&self, n: usize) -> Result<&[u64]> {
        if n > self.terms.len() {
            return Err(Error::invalid(format!(
                "requested {n} terms but sequence {:?} has only {} ({} short)",
                self.label,
                self.terms.len(),
                n - self.terms.len()
            )));
        }
        Ok(&self.terms[..n])
    }
}

/// Real multipliers `α_1, ..., α_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaVector {
    alphas: Vec<f64>,
}

impl AlphaVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::invalid("alpha vector must be non-empty"));
        }
        if let Some(a) = alphas.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("alpha entry {a} is not finite")));
        }
        Ok(Self { alphas })
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.alphas
    }
}

/// `m * 2^exp == |x|` with `m < 2^53`.
fn decompose(x: f64) -> (u64, i32) {
    let bits = x.abs().to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (mantissa, -1074)
    } else {
        (mantissa | (1u64 << 52), exp - 1075)
    }
}

/// `{a * alpha}` computed exactly from the binary value of `alpha`, then
/// rounded to the nearest `f64` (clamped below one).
///
/// `alpha` must be finite.
pub fn frac_mul(a: u64, alpha: f64) -> f64 {
    debug_assert!(alpha.is_finite());
    let (m, e) = decompose(alpha);
    let neg = alpha.is_sign_negative();
    if e >= 0 || a == 0 || m == 0 {
        return 0.0;
    }
    let product = a as u128 * m as u128;
    let shift = (-e) as u32;
    let value = if shift >= 128 {
        // product < 2^117, no integer part
        let tiny = product as f64 * 2f64.powi(-(shift as i32));
        if neg && tiny > 0.0 {
            1.0 - tiny
        } else {
            tiny
        }
    } else {
        let mask = (1u128 << shift) - 1;
        let mut low = product & mask;
        if neg && low != 0 {
            low = (1u128 << shift) - low;
        }
        low as f64 * 2f64.powi(-(shift as i32))
    };
    if value >= 1.0 {
        ONE_MINUS_ULP
    } else {
        value
    }
}

/// ChaCha8 stream `stream` of the generator seeded with `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn require_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::invalid(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `n` i.i.d. uniform points in `[0,1)^dim`.
///
/// Coordinates are drawn point by point from ChaCha8 (`seed_from_u64(seed)`,
/// stream 0) using `rand`'s standard `f64` conversion, so output is stable for
/// a fixed seed.
pub fn gen_uniform_iid(dim: usize, n: usize, seed: u64) -> Result<PointSet> {
    gen_uniform_iid_stream(dim, n, seed, 0)
}

/// Like [`gen_uniform_iid`] but drawing from an explicit ChaCha stream; Monte
/// Carlo trials use one stream per trial.
pub fn gen_uniform_iid_stream(dim: usize, n: usize, seed: u64, stream: u64) -> Result<PointSet> {
    require_positive("dimension", dim)?;
    require_positive("N", n)?;
    let mut rng = seeded_rng(seed, stream);
    let coords: Vec<f64> = (0..n * dim).map(|_| rng.random::<f64>()).collect();
    Ok(PointSet::from_flat_trusted(
        dim,
        coords,
        format!("uniform(d={dim},seed={seed},stream={stream})"),
    ))
}

/// Uniform random `α` in `[0,1)^dim` from the same seeded generator family.
pub fn random_alpha(dim: usize, seed: u64) -> Result<AlphaVector> {
    require_positive("dimension", dim)?;
    let mut rng = seeded_rng(seed, 0);
    AlphaVector::new((0..dim).map(|_| rng.random::<f64>()).collect())
}

fn multiples(alpha: &AlphaVector, terms: impl Iterator<Item = u64>, cap: usize) -> Vec<f64> {
    let mut coords = Vec::with_capacity(cap * alpha.dim());
    for a in terms {
        coords.extend(alpha.values().iter().map(|&al| frac_mul(a, al)));
    }
    coords
}

/// Points `({n α_1}, ..., {n α_d})` for `n = 1..=N`.
pub fn gen_kronecker(alpha: &AlphaVector, n: usize) -> Result<PointSet> {
    require_positive("N", n)?;
    let coords = multiples(alpha, 1..=n as u64, n);
    Ok(PointSet::from_flat_trusted(
        alpha.dim(),
        coords,
        format!("kronecker(alpha={:?})", alpha.values()),
    ))
}

/// Points `({a_n α_1}, ..., {a_n α_d})` for the first `n` terms of `seq`.
pub fn gen_an_alpha(seq: &IntegerSequence, alpha: &AlphaVector, n: usize) -> Result<PointSet> {
    require_positive("N", n)?;
    let terms = seq.prefix(n)?;
    let coords = multiples(alpha, terms.iter().copied(), n);
    Ok(PointSet::from_flat_trusted(
        alpha.dim(),
        coords,
        format!("an_alpha(seq={},alpha={:?})", seq.label(), alpha.values()),
    ))
}

/// Named integer sequence families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegerFamily {
    Identity,
    Squares,
    Cubes,
    Primes,
    LacunaryBase2,
    File,
}

impl IntegerFamily {
    pub fn name(self) -> &'static str {
        match self {
            IntegerFamily::Identity => "identity",
            IntegerFamily::Squares => "squares",
            IntegerFamily::Cubes => "cubes",
            IntegerFamily::Primes => "primes",
            IntegerFamily::LacunaryBase2 => "lacunary_base2",
            IntegerFamily::File => "file",
        }
    }
}

impl std::str::FromStr for IntegerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => IntegerFamily::Identity,
            "squares" => IntegerFamily::Squares,
            "cubes" => IntegerFamily::Cubes,
            "primes" => IntegerFamily::Primes,
            "lacunary_base2" | "lacunary" => IntegerFamily::LacunaryBase2,
            "file" => IntegerFamily::File,
            other => return Err(Error::invalid(format!("unknown integer family {other:?}"))),
        })
    }
}

fn powers(n: usize, exp: u32) -> Result<Vec<u64>> {
    (1..=n as u64)
        .map(|k| {
            k.checked_pow(exp)
                .ok_or_else(|| Error::Range(format!("{k}^{exp} overflows 64 bits")))
        })
        .collect()
}

/// First `n` terms of `family`. For [`IntegerFamily::File`], `source` names
/// an integer-sequence file which must contain at least `n` terms.
pub fn make_integer_sequence(
    family: IntegerFamily,
    n: usize,
    source: Option<&Path>,
) -> Result<IntegerSequence> {
    require_positive("N", n)?;
    let terms = match family {
        IntegerFamily::Identity => (1..=n as u64).collect(),
        IntegerFamily::Squares => powers(n, 2)?,
        IntegerFamily::Cubes => powers(n, 3)?,
        IntegerFamily::Primes => first_primes(n),
        IntegerFamily::LacunaryBase2 => {
            if n >= 64 {
                return Err(Error::Range(format!(
                    "2^{n} does not fit in 64 bits (at most 63 lacunary terms)"
                )));
            }
            (1..=n as u32).map(|k| 1u64 << k).collect()
        }
        IntegerFamily::File => {
            let path = source.ok_or_else(|| Error::invalid("family=file needs a source path"))?;
            let seq = io::read_integer_sequence(path)?;
            let terms = seq.prefix(n)?.to_vec();
            return IntegerSequence::new(terms, seq.label());
        }
    };
    IntegerSequence::new(terms, family.name())
}

/// The first `n` primes via a sieve sized by `n (ln n + ln ln n)`.
pub fn first_primes(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let bound = if n < 6 {
        13
    } else {
        let nf = n as f64;
        (nf * (nf.ln() + nf.ln().ln())).ceil() as usize + 1
    };
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::with_capacity(n);
    for i in 2..=bound {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        if primes.len() == n {
            break;
        }
        let mut j = i * i;
        while j <= bound {
            composite[j] = true;
            j += i;
        }
    }
    debug_assert_eq!(primes.len(), n);
    primes
}

/// Evaluates `f(k) = coeffs[0] + coeffs[1] k + coeffs[2] k^2 + ...` for
/// `k = 1..=n` and checks the values form a valid integer sequence.
pub fn polynomial_sequence(coeffs: &[i64], n: usize) -> Result<IntegerSequence> {
    require_positive("N", n)?;
    let degree = coeffs
        .iter()
        .rposition(|&c| c != 0)
        .ok_or_else(|| Error::invalid("polynomial has no nonzero coefficient"))?;
    if degree < 2 {
        return Err(Error::invalid(format!(
            "polynomial must have degree at least 2, got {degree}"
        )));
    }
    let coeffs = &coeffs[..=degree];
    let overflow = |k: u64| Error::Range(format!("f({k}) overflows"));
    let mut terms = Vec::with_capacity(n);
    for k in 1..=n as u64 {
        let mut acc: i128 = 0;
        for &c in coeffs.iter().rev() {
            acc = acc
                .checked_mul(k as i128)
                .and_then(|v| v.checked_add(c as i128))
                .ok_or_else(|| overflow(k))?;
        }
        if acc < 0 {
            return Err(Error::Validation {
                line: k as usize,
                msg: format!("f({k}) = {acc} is negative"),
            });
        }
        let v = u64::try_from(acc).map_err(|_| overflow(k))?;
        if let Some(&prev) = terms.last() {
            if v <= prev {
                return Err(Error::Validation {
                    line: k as usize,
                    msg: format!("f is not strictly increasing: f({}) = {prev}, f({k}) = {v}", k - 1),
                });
            }
        }
        terms.push(v);
    }
    IntegerSequence::new(terms, format!("poly{coeffs:?}"))
}

/// Points `({f(n) α_1}, ..., {f(n) α_d})` for an integer polynomial `f` of
/// degree at least two, coefficients in ascending order of power.
pub fn gen_polynomial_alpha(coeffs: &[i64], alpha: &AlphaVector, n: usize) -> Result<PointSet> {
    let seq = polynomial_sequence(coeffs, n)?;
    gen_an_alpha(&seq, alpha, n)
}

/// Radical inverse of `k` in base `b`.
fn radical_inverse(mut k: u64, b: u64) -> f64 {
    let mut reversed: u128 = 0;
    let mut denom: u128 = 1;
    while k > 0 {
        reversed = reversed * b as u128 + (k % b) as u128;
        denom *= b as u128;
        k /= b;
    }
    let v = reversed as f64 / denom as f64;
    if v >= 1.0 {
        ONE_MINUS_ULP
    } else {
        v
    }
}

/// Halton points for `n = 1..=N` using the first `dim` primes as bases.
pub fn gen_halton(dim: usize, n: usize) -> Result<PointSet> {
    require_positive("dimension", dim)?;
    require_positive("N", n)?;
    let bases = first_primes(dim);
    let mut coords = Vec::with_capacity(n * dim);
    for k in 1..=n as u64 {
        coords.extend(bases.iter().map(|&b| radical_inverse(k, b)));
    }
    Ok(PointSet::from_flat_trusted(dim, coords, format!("halton(d={dim})")))
}
