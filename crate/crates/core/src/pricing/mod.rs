//! Arithmetic-average Asian call pricing: a GBM Monte Carlo baseline and
//! amplitude-estimation readouts of the discretised payoff.
//!
//! The amplitude route bins simulated path averages into a histogram of
//! `2^m` bins, loads it into a register with a payoff ancilla, and reads
//! `a = sum_j p_j f_j` where `f_j = max(S_j - K, 0) / B`. The discounted
//! price is `exp(-rT) B a`.

mod amplitude;
mod histogram;
mod monte_carlo;

pub(crate) use histogram::bin_index;

pub use amplitude::{
    exact_amplitude_price, grover_ancilla_probability, log_likelihood, mlqae_estimate, mlqae_from_counts,
    price_from_amplitude, shot_amplitude_price, AmplitudeEstimate, AmplitudeMethod, LevelCounts, LIKELIHOOD_CLAMP,
};
pub use histogram::PayoffHistogram;
pub use monte_carlo::{mc_price_asian, mc_price_from_averages, simulate_path_averages, GbmSpec, McEstimate};

use thiserror::Error;

use crate::statevector::StateError;

/// Bins used when the caller does not choose (`2^7 = 128`).
pub const DEFAULT_BIN_EXPONENT: u32 = 7;
/// Classical presample size for the histogram.
pub const DEFAULT_PRESAMPLE_PATHS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("invalid GBM specification: {0}")]
    InvalidSpec(&'static str),
    #[error("need at least 2 paths, got {0}")]
    TooFewPaths(usize),
    #[error("empty sample")]
    EmptySample,
    #[error("payoff bound {given} is below the largest bin payoff {required}")]
    BoundTooSmall { given: f64, required: f64 },
    #[error("Grover schedule is empty")]
    EmptySchedule,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("amplitude {0} outside [0, 1]")]
    AmplitudeOutOfRange(f64),
    #[error("bin exponent {0} outside 0..=15")]
    BinExponent(u32),
    #[error(transparent)]
    State(#[from] StateError),
}
