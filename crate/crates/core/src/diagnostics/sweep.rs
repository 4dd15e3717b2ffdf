use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    gen_an_alpha, gen_halton, gen_kronecker, gen_polynomial_alpha, gen_uniform_iid, AlphaVector,
    IntegerSequence,
};
use crate::io::format_float;
use crate::paircorr::{pair_corr_celllist, poisson_reference, SGrid};
use crate::torus::PointSet;

/// Which sequence a sweep (or the CLI) draws its points from.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Uniform { seed: u64 },
    Kronecker { alpha: AlphaVector },
    AnAlpha { seq: IntegerSequence, alpha: AlphaVector },
    Polynomial { coeffs: Vec<i64>, alpha: AlphaVector },
    Halton,
}

impl GeneratorSpec {
    /// First `n` points in dimension `dim`.
    pub fn generate(&self, dim: usize, n: usize) -> Result<PointSet> {
        let check = |alpha: &AlphaVector| {
            if alpha.dim() != dim {
                Err(Error::invalid(format!(
                    "alpha has {} entries but dimension is {dim}",
                    alpha.dim()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            GeneratorSpec::Uniform { seed } => gen_uniform_iid(dim, n, *seed),
            GeneratorSpec::Kronecker { alpha } => {
                check(alpha)?;
                gen_kronecker(alpha, n)
            }
            GeneratorSpec::AnAlpha { seq, alpha } => {
                check(alpha)?;
                gen_an_alpha(seq, alpha, n)
            }
            GeneratorSpec::Polynomial { coeffs, alpha } => {
                check(alpha)?;
                gen_polynomial_alpha(coeffs, alpha, n)
            }
            GeneratorSpec::Halton => gen_halton(dim, n),
        }
    }
}

/// `round(M^(1+γ))` for `M = 1, 2, 4, 8, ...`, deduplicated, restricted to
/// `[2, n_max]`, with `n_max` appended if missing.
pub fn default_n_schedule(n_max: usize, gamma: f64) -> Result<Vec<usize>> {
    if n_max < 2 {
        return Err(Error::invalid("n_max must be at least 2"));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be >= 0, got {gamma}")));
    }
    let mut out = Vec::new();
    let mut m = 1.0f64;
    loop {
        let v = m.powf(1.0 + gamma).round();
        if v > n_max as f64 {
            break;
        }
        let v = v as usize;
        if v >= 2 && out.last() != Some(&v) {
            out.push(v);
        }
        m *= 2.0;
    }
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    Ok(out)
}

/// `F_N(s)` over a table of prefix lengths `N` and grid values `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweep {
    pub dim: usize,
    pub s_values: SGrid,
    pub n_values: Vec<usize>,
    /// `table[i][j] = F_{n_values[i]}(s_values[j])`.
    pub table: Vec<Vec<f64>>,
    /// `|table[i][j] - (2 s_j)^d|`.
    pub deviations: Vec<Vec<f64>>,
    pub label: String,
}

/// One `N,s,F,poisson_ref,abs_dev` record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub s: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub poisson_ref: f64,
    pub abs_dev: f64,
}

impl ConvergenceSweep {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Largest deviation in the row for sample size `n`, if present.
    pub fn max_deviation_at(&self, n: usize) -> Option<f64> {
        let i = self.n_values.iter().position(|&v| v == n)?;
        Some(self.deviations[i].iter().copied().fold(0.0, f64::max))
    }

    pub fn rows(&self) -> Vec<SweepRow> {
        let mut rows = Vec::with_capacity(self.n_values.len() * self.s_values.len());
        for (i, &n) in self.n_values.iter().enumerate() {
            for (j, &s) in self.s_values.values().iter().enumerate() {
                rows.push(SweepRow {
                    n,
                    s,
                    f: self.table[i][j],
                    poisson_ref: poisson_reference(s, self.dim),
                    abs_dev: self.deviations[i][j],
                });
            }
        }
        rows
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "N,s,F,poisson_ref,abs_dev")?;
        for r in self.rows() {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.n,
                format_float(r.s),
                format_float(r.f),
                format_float(r.poisson_ref),
                format_float(r.abs_dev)
            )?;
        }
        Ok(())
    }

    pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<SweepRow>> {
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

/// Evaluates `F_N(s)` on prefixes of one generated sequence.
pub fn convergence_sweep(
    gen: &GeneratorSpec,
    dim: usize,
    s_grid: &SGrid,
    n_values: &[usize],
) -> Result<ConvergenceSweep> {
    if n_values.is_empty() {
        return Err(Error::invalid("n_values must not be empty"));
    }
    if n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n_values must be positive and strictly increasing"));
    }
    let full = gen.generate(dim, *n_values.last().expect("non-empty"))?;
    let reference: Vec<f64> = s_grid.values().iter().map(|&s| poisson_reference(s, dim)).collect();
    let mut table = Vec::with_capacity(n_values.len());
    let mut deviations = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let res = pair_corr_celllist(&full.prefix(n), s_grid)?;
        deviations.push(
            res.f_values
                .iter()
                .zip(&reference)
                .map(|(f, r)| (f - r).abs())
                .collect(),
        );
        table.push(res.f_values);
    }
    Ok(ConvergenceSweep {
        dim,
        s_values: s_grid.clone(),
        n_values: n_values.to_vec(),
        table,
        deviations,
        label: full.label().to_string(),
    })
}
