//! Additive energy `E(A) = #{(a, b, c, d) in A^4 : a + b = c + d}` and the
//! representation function `r_N(v) = #{k != l : a_k - a_l = v}` of the first
//! `N` terms of an integer sequence.
//!
//! Energy is computed twice, from the multiset of pairwise sums and as
//! `N^2 + sum_{v != 0} r_N(v)^2`, and the two must agree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::IntegerSequence;

/// Largest `N` accepted by the energy routines.
pub const MAX_ENERGY_N: usize = 1_000_000;

/// Spans up to this length are tallied in a dense array instead of by sorting.
const DENSE_SPAN_LIMIT: u64 = 1 << 24;

/// Energy of the first `N` terms together with its representation function.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub n: usize,
    pub energy: u128,
    /// `E / N^3`.
    pub normalized: f64,
    /// `v -> r_N(v)` for every `v != 0` with a nonzero count; symmetric in `v`.
    pub rep_function: BTreeMap<i128, u64>,
}

fn checked_prefix(a: &IntegerSequence, n: usize) -> Result<&[u64]> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    if n > MAX_ENERGY_N {
        return Err(Error::Range(format!(
            "N = {n} exceeds the energy limit {MAX_ENERGY_N}"
        )));
    }
    a.prefix(n)
}

/// Run-length tallies of `values`, sorted by value.
fn tally_sorted<T: Ord + Copy>(mut values: Vec<T>) -> Vec<(T, u64)> {
    values.sort_unstable();
    let mut out: Vec<(T, u64)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((last, c)) if *last == v => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// `c(v)` = number of index pairs `k < l` with `a_l - a_k = v`, for `v > 0`.
fn positive_differences(terms: &[u64]) -> Vec<(u64, u64)> {
    let n = terms.len();
    if n < 2 {
        return Vec::new();
    }
    let span = terms[n - 1] - terms[0];
    if span < DENSE_SPAN_LIMIT {
        let mut dense = vec![0u32; span as usize + 1];
        for (k, &x) in terms.iter().enumerate() {
            for &y in &terms[k + 1..] {
                dense[(y - x) as usize] += 1;
            }
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(v, c)| (v as u64, c as u64))
            .collect()
    } else {
        let mut diffs = Vec::with_capacity(n * (n - 1) / 2);
        for (k, &x) in terms.iter().enumerate() {
            diffs.extend(terms[k + 1..].iter().map(|&y| y - x));
        }
        tally_sorted(diffs)
    }
}

/// `r_N(v)` for every nonzero `v` that occurs.
pub fn representation_function(a: &IntegerSequence, n: usize) -> Result<BTreeMap<i128, u64>> {
    let terms = checked_prefix(a, n)?;
    let mut map = BTreeMap::new();
    for (v, c) in positive_differences(terms) {
        map.insert(v as i128, c);
        map.insert(-(v as i128), c);
    }
    Ok(map)
}

/// `sum_S R(S)^2` where `R(S)` counts ordered pairs `(k, l)` with
/// `a_k + a_l = S`.
pub fn energy_via_sums(terms: &[u64]) -> u128 {
    let n = terms.len();
    if n == 0 {
        return 0;
    }
    let square = |c: u64| (c as u128) * (c as u128);
    let lo = terms[0];
    let span = terms[n - 1] - lo;
    if span < DENSE_SPAN_LIMIT / 2 {
        // index by (a_k - a_1) + (a_l - a_1)
        let mut dense = vec![0u64; 2 * span as usize + 1];
        for (k, &x) in terms.iter().enumerate() {
            dense[2 * (x - lo) as usize] += 1;
            for &y in &terms[k + 1..] {
                dense[((x - lo) + (y - lo)) as usize] += 2;
            }
        }
        dense.into_iter().map(square).sum()
    } else {
        sparse_energy_via_sums(terms)
    }
}

/// Sort-based fallback: each sum carries its multiplicity as an ordered pair
/// count (1 on the diagonal, 2 off it).
fn sparse_energy_via_sums(terms: &[u64]) -> u128 {
    let mut sums: Vec<(u128, u8)> = Vec::with_capacity(terms.len() * (terms.len() + 1) / 2);
    for (k, &x) in terms.iter().enumerate() {
        sums.push((2 * x as u128, 1));
        sums.extend(terms[k + 1..].iter().map(|&y| (x as u128 + y as u128, 2)));
    }
    sums.sort_unstable_by_key(|&(s, _)| s);
    let mut total = 0u128;
    let mut i = 0;
    while i < sums.len() {
        let s = sums[i].0;
        let mut r = 0u128;
        while i < sums.len() && sums[i].0 == s {
            r += sums[i].1 as u128;
            i += 1;
        }
        total += r * r;
    }
    total
}

/// `N^2 + sum_{v != 0} r_N(v)^2`.
pub fn energy_via_differences(terms: &[u64]) -> u128 {
    let n = terms.len() as u128;
    let off: u128 = positive_differences(terms)
        .into_iter()
        .map(|(_, c)| 2 * (c as u128) * (c as u128))
        .sum();
    n * n + off
}

/// Additive energy of the first `n` terms of `a`.
pub fn additive_energy(a: &IntegerSequence, n: usize) -> Result<EnergyReport> {
    let terms = checked_prefix(a, n)?;
    let by_sums = energy_via_sums(terms);
    let rep_function = representation_function(a, n)?;
    let nn = n as u128;
    let by_diffs = nn * nn + rep_function.values().map(|&c| (c as u128) * (c as u128)).sum::<u128>();
    if by_sums != by_diffs {
        return Err(Error::Internal(format!(
            "energy paths disagree: sums give {by_sums}, differences give {by_diffs}"
        )));
    }
    Ok(EnergyReport {
        n,
        energy: by_sums,
        normalized: by_sums as f64 / (n as f64).powi(3),
        rep_function,
    })
}

/// Thresholds for [`energy_regime`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeThresholds {
    /// `E / N^3 >= tau_max` counts as maximal order.
    pub tau_max: f64,
    /// `E <= kappa N^3 / (ln N)^c` counts as subcritical.
    pub kappa: f64,
    pub c: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            tau_max: 0.1,
            kappa: 1.0,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRegime {
    MaximalOrder,
    Subcritical,
    Indeterminate,
}

/// Heuristic classification of a finite energy against the two regimes of the
/// metric theory: energy of order `N^3` versus an energy saving of
/// `(log N)^c`. The band in between is reported as indeterminate.
pub fn energy_regime(report: &EnergyReport, th: &RegimeThresholds) -> EnergyRegime {
    if report.n < 3 {
        return EnergyRegime::Indeterminate;
    }
    let n3 = (report.n as f64).powi(3);
    if report.normalized >= th.tau_max {
        EnergyRegime::MaximalOrder
    } else if report.energy as f64 <= th.kappa * n3 / (report.n as f64).ln().powf(th.c) {
        EnergyRegime::Subcritical
    } else {
        EnergyRegime::Indeterminate
    }
}

/// JSON view of an energy computation.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub energy: u128,
    pub normalized: f64,
    pub regime: EnergyRegime,
    pub thresholds: RegimeThresholds,
    /// `[v, r(v)]`, largest `r` first (ties by `v`), at most 100 entries.
    pub top_representations: Vec<(i128, u64)>,
}

impl EnergySummary {
    pub fn new(report: &EnergyReport, th: RegimeThresholds) -> Self {
        let mut top: Vec<(i128, u64)> = report.rep_function.iter().map(|(&v, &c)| (v, c)).collect();
        top.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        top.truncate(100);
        Self {
            n: report.n,
            energy: report.energy,
            normalized: report.normalized,
            regime: energy_regime(report, &th),
            thresholds: th,
            top_representations: top,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_integer_sequence, IntegerFamily};
    use proptest::prelude::*;

    fn seq(v: &[u64]) -> IntegerSequence {
        IntegerSequence::new(v.to_vec(), "t").unwrap()
    }

    /// Direct count over `A^4`.
    fn quadruple_energy(t: &[u64]) -> u128 {
        let mut e = 0;
        for &a in t {
            for &b in t {
                for &c in t {
                    for &d in t {
                        if a as u128 + b as u128 == c as u128 + d as u128 {
                            e += 1;
                        }
                    }
                }
            }
        }
        e
    }

    fn enumerate_reps(t: &[u64]) -> BTreeMap<i128, u64> {
        let mut m = BTreeMap::new();
        for (k, &x) in t.iter().enumerate() {
            for (l, &y) in t.iter().enumerate() {
                if k != l {
                    *m.entry(x as i128 - y as i128).or_insert(0) += 1;
                }
            }
        }
        m
    }

    #[test]
    fn representation_examples() {
        let r = representation_function(&seq(&[1, 2, 3]), 3).unwrap();
        assert_eq!(r, BTreeMap::from([(-2, 1), (-1, 2), (1, 2), (2, 1)]));
        let sidon = representation_function(&seq(&[1, 2, 5, 11]), 4).unwrap();
        assert_eq!(sidon.len(), 12);
        assert!(sidon.values().all(|&c| c == 1));
        assert_eq!(sidon, enumerate_reps(&[1, 2, 5, 11]));
        let r = representation_function(&seq(&[2, 4, 8]), 3).unwrap();
        assert_eq!(r, BTreeMap::from([(-6, 1), (-4, 1), (-2, 1), (2, 1), (4, 1), (6, 1)]));
    }

    #[test]
    fn energy_examples() {
        assert_eq!(additive_energy(&seq(&[1, 2, 3]), 3).unwrap().energy, 19);
        assert_eq!(quadruple_energy(&[1, 2, 3]), 19);
        let id = make_integer_sequence(IntegerFamily::Identity, 4, None).unwrap();
        assert_eq!(additive_energy(&id, 4).unwrap().energy, 44);
        assert_eq!(additive_energy(&seq(&[1, 2, 5, 11]), 4).unwrap().energy, 28);
        assert_eq!(additive_energy(&seq(&[7]), 1).unwrap().energy, 1);
    }

    #[test]
    fn energy_errors() {
        let s = seq(&[1, 2, 3]);
        assert!(additive_energy(&s, 0).is_err());
        assert!(additive_energy(&s, 4).is_err());
        assert!(matches!(additive_energy(&s, MAX_ENERGY_N + 1), Err(Error::Range(_))));
    }

    #[test]
    fn sparse_paths_match_dense_paths() {
        let squares = make_integer_sequence(IntegerFamily::Squares, 300, None).unwrap();
        let t = squares.terms();
        let shifted: Vec<u64> = t.iter().map(|x| x * (1 << 20)).collect();
        assert!(shifted[299] - shifted[0] > DENSE_SPAN_LIMIT);
        assert_eq!(energy_via_sums(t), energy_via_sums(&shifted));
        assert_eq!(energy_via_differences(t), energy_via_differences(&shifted));
        assert_eq!(energy_via_sums(t), energy_via_differences(t));
    }

    #[test]
    fn lacunary_is_sidon_like() {
        let lac = make_integer_sequence(IntegerFamily::LacunaryBase2, 60, None).unwrap();
        let rep = additive_energy(&lac, 60).unwrap();
        assert_eq!(rep.energy, 2 * 60 * 60 - 60);
        assert_eq!(energy_regime(&rep, &RegimeThresholds::default()), EnergyRegime::Subcritical);
        assert_eq!(quadruple_energy(&lac.terms()[..12]), 2 * 144 - 12);
        // extreme terms near 2^63 take the u128 sort path
        let big = make_integer_sequence(IntegerFamily::LacunaryBase2, 63, None).unwrap();
        assert_eq!(additive_energy(&big, 63).unwrap().energy, 2 * 63 * 63 - 63);
    }

    #[test]
    fn regime_examples() {
        let th = RegimeThresholds::default();
        let id = make_integer_sequence(IntegerFamily::Identity, 1000, None).unwrap();
        let rep = additive_energy(&id, 1000).unwrap();
        assert!((rep.normalized - 2.0 / 3.0).abs() < 1e-3);
        assert_eq!(energy_regime(&rep, &th), EnergyRegime::MaximalOrder);
        let two = additive_energy(&id, 2).unwrap();
        assert_eq!(energy_regime(&two, &th), EnergyRegime::Indeterminate);
    }

    #[test]
    fn summary_is_sorted_and_capped() {
        let id = make_integer_sequence(IntegerFamily::Identity, 300, None).unwrap();
        let rep = additive_energy(&id, 300).unwrap();
        let sum = EnergySummary::new(&rep, RegimeThresholds::default());
        assert_eq!(sum.top_representations.len(), 100);
        assert_eq!(sum.top_representations[0], (-1, 299));
        assert_eq!(sum.top_representations[1], (1, 299));
        assert!(sum.top_representations.windows(2).all(|w| w[0].1 >= w[1].1));
        let json = serde_json::to_value(&sum).unwrap();
        assert_eq!(json["regime"], "maximal_order");
        assert_eq!(json["N"], 300);
    }

    #[test]
    fn closed_form_for_progressions() {
        for n in (1..=200u64).chain([1000, 10_000]) {
            let t: Vec<u64> = (1..=n).collect();
            let expected = (n * n + (n - 1) * n * (2 * n - 1) / 3) as u128;
            assert_eq!(energy_via_sums(&t), expected, "N = {n}");
        }
    }

    fn increasing_set(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::btree_set(0u64..5_000, 1..max_len).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn paths_agree_and_match_quadruples(t in increasing_set(25)) {
            let n = t.len();
            let s = seq(&t);
            let rep = additive_energy(&s, n).unwrap();
            prop_assert_eq!(rep.energy, quadruple_energy(&t));
            prop_assert_eq!(rep.energy, energy_via_differences(&t));
            prop_assert_eq!(&rep.rep_function, &enumerate_reps(&t));
            let nn = n as u128;
            prop_assert!(nn * nn <= rep.energy && rep.energy <= nn * nn * nn);
            for (v, c) in &rep.rep_function {
                prop_assert_eq!(rep.rep_function.get(&-v), Some(c));
            }
        }

        #[test]
        fn dilation_invariance(t in increasing_set(60), m in 1u64..1000) {
            let dilated: Vec<u64> = t.iter().map(|x| x * m).collect();
            prop_assert_eq!(energy_via_sums(&t), energy_via_sums(&dilated));
        }
    }
}
