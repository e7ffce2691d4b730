//! Tail-risk estimation and stress propagation.
//!
//! Losses follow `L_t = -ln(P_t / P_{t-1})`. VaR and CVaR come from three
//! routes: historical order statistics, a fitted normal, and a discretised
//! loss grid queried through a CDF oracle (the quantity an amplitude
//! encoding of the grid exposes). All tail events are inclusive,
//! `{L >= VaR}`, on every route.

mod measures;
mod scenarios;
mod stress;

pub use measures::{
    build_loss_grid, compute_losses, cvar_from_tail_amplitudes, grid_probability, grid_risk_measures, grid_var_search,
    grover_tail_boost, grover_tail_boost_simulated, historical_var_cvar, parametric_normal_var_cvar, LossGrid,
    LossSample, RiskMethod, RiskReport, Side,
};
pub use scenarios::{pca_loading, portfolio_losses, principal_factors, simulate_correlated_returns, FactorModel};
pub use stress::{
    fit_var1, proxy_exponential, stress_propagate_classical, stress_propagate_quantum_inspired, StressSystem,
};

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::statevector::StateError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiskError {
    #[error("empty sample")]
    EmptySample,
    #[error("need at least 2 prices, got {0}")]
    TooFewPrices(usize),
    #[error("non-positive price {price} at index {index}")]
    NonPositivePrice { index: usize, price: f64 },
    #[error("confidence level {0} outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("standard deviation must be non-negative, got {0}")]
    InvalidSigma(f64),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("a loss grid needs at least one bin")]
    ZeroBins,
    #[error("no probability mass at or above the threshold {0}")]
    ZeroTailMass(f64),
    #[error("covariance is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weights sum to {0}, expected 1")]
    WeightsNotNormalised(f64),
    #[error("regressor matrix is rank deficient")]
    RankDeficient,
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    State(#[from] StateError),
}
