use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "paircorr", version, about = "Pair correlation statistics on the d-dimensional torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Write a generated point set
    Generate,
    /// Pair correlation statistic F_N(s) of a point set
    Paircorr,
    /// Additive energy of an integer sequence
    Energy,
    /// F_N(s) over a schedule of prefix lengths
    Converge,
    /// Kronecker pair-excess witness from the best simultaneous approximation
    Witness,
    /// Simultaneous approximation search
    Approx,
    /// Star discrepancy estimate
    Discrepancy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Uniform,
    Kronecker,
    #[value(name = "an_alpha")]
    AnAlpha,
    Poly,
    Halton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Opts {
    /// Dimension d
    #[arg(long, global = true, default_value_t = 2)]
    pub dim: usize,

    /// Number of points / terms (maximum N for `converge`)
    #[arg(long, global = true, default_value_t = 1000)]
    pub n: usize,

    /// Comma-separated s values
    #[arg(long = "s", global = true, default_value = "1")]
    pub s_list: String,

    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Point generator (ignored when --in supplies a point file)
    #[arg(long = "gen", global = true, value_enum, default_value_t = GenKind::Uniform)]
    pub generator: GenKind,

    /// Comma-separated alphas: decimals or sqrt<k>, phi. Defaults to square
    /// roots of the first d primes
    #[arg(long, global = true)]
    pub alpha: Option<String>,

    /// identity, squares, cubes, primes, lacunary_base2 or file
    #[arg(long, global = true, default_value = "squares")]
    pub family: String,

    /// Integer polynomial coefficients, constant term first
    #[arg(long = "poly-coeffs", global = true, default_value = "0,0,1")]
    pub poly_coeffs: String,

    /// Input point-set file (paircorr, discrepancy) or integer file (family=file)
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,

    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true, default_value_t = 100_000)]
    pub qmax: u64,

    #[arg(long, global = true, default_value_t = 1.0)]
    pub rho: f64,

    /// Independent uniform trials (paircorr with --gen uniform)
    #[arg(long, global = true, default_value_t = 1)]
    pub trials: usize,

    #[arg(long = "grid-k", global = true, default_value_t = paircorr_core::diagnostics::DEFAULT_GRID_K)]
    pub grid_k: usize,

    /// Exponent of the N_M = M^(1+gamma) sweep schedule
    #[arg(long, global = true, default_value_t = 0.1)]
    pub gamma: f64,
}
