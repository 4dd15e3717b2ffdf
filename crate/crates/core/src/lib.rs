//! Pair correlation statistics of sequences on the `d`-dimensional torus.
//!
//! The statistic
//!
//! ```text
//! F_N(s) = (1/N) #{1 <= l != m <= N : ||x_l - x_m||_inf <= s / N^(1/d)}
//! ```
//!
//! tends to `(2s)^d` for i.i.d. uniform points ("Poissonian pair
//! correlations"). This crate computes it exactly, generates the sequence
//! families of interest (uniform, Kronecker, `{a_n α}`, polynomial, Halton),
//! computes additive energies of integer sequences, and provides the
//! diagnostics that compare all of these against the theory.

pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod generators;
pub mod io;
pub mod paircorr;
pub mod torus;

pub use error::{Error, Result};
pub use generators::{AlphaVector, IntegerFamily, IntegerSequence};
pub use paircorr::{pair_corr_bruteforce, pair_corr_celllist, PairCorrResult, SGrid};
pub use torus::{PointSet, TorusPoint};
