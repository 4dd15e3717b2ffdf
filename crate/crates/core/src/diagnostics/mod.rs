//! Comparisons between computed statistics and the closed-form quantities of
//! the theory: moments of `F_N` for uniform samples, the lower bound forced by
//! non-uniform distribution, the Kronecker pair-excess witness, discrepancy
//! estimates and convergence sweeps.

mod discrepancy;
mod moments;
mod nonuniform;
mod sweep;
mod witness;

pub use discrepancy::{star_discrepancy_estimate, star_discrepancy_exact_1d, DEFAULT_GRID_K};
pub use moments::{
    calibrate_chebyshev_constant, chebyshev_bound, chebyshev_epsilon, expectation_formula,
    pair_corr_trials, variance_monte_carlo, variance_scale, MonteCarloMoments,
};
pub use nonuniform::{min_contradicting_s, nonuniform_leading_coeff, nonuniform_lower_bound};
pub use sweep::{convergence_sweep, default_n_schedule, ConvergenceSweep, GeneratorSpec, SweepRow};
pub use witness::{
    best_approximation, kronecker_witness, minimal_a, simultaneous_approx_search, ApproxHit,
    KroneckerWitness, LAG_DIST_TOL,
};
