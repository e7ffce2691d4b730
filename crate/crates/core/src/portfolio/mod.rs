//! Cardinality-penalised mean-variance selection as a QUBO, its Ising
//! form, and the exact classical enumeration baseline.
//!
//! The benchmark objective is `lambda x'Sx - mu'x + A (sum x - K)^2`. The
//! alternative placement `x'Sx - lambda' mu'x` is the same problem after
//! dividing by `lambda` and setting `lambda' = 1 / lambda`.

mod qubo;
mod universe;

pub use qubo::{
    bits_from_index, build_cardinality_qubo, index_from_bits, qubo_energy, qubo_to_ising, IsingModel, QuboProblem,
};
pub use universe::{enumerate_feasible, estimate_annualized_moments, AssetUniverse, PortfolioRecord};

use thiserror::Error;

/// Largest universe accepted (matches the simulator's qubit capacity).
pub const MAX_ASSETS: usize = 16;

/// Cap on `C(n, K)` for exact enumeration.
pub const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PortfolioError {
    #[error("need at least 2 observations per asset, got {0}")]
    TooFewObservations(usize),
    #[error("series are misaligned: asset {asset} has {got} observations, expected {expected}")]
    Misaligned { asset: usize, expected: usize, got: usize },
    #[error("non-positive price {price} for asset {asset}")]
    NonPositivePrice { asset: usize, price: f64 },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cardinality {k} outside 1..={n}")]
    CardinalityOutOfRange { k: usize, n: usize },
    #[error("penalty coefficient must be positive, got {0}")]
    InvalidPenalty(f64),
    #[error("{0} assets exceeds the limit of {MAX_ASSETS}")]
    TooManyAssets(usize),
    #[error("C(n, K) = {0} exceeds the enumeration cap")]
    EnumerationCap(u64),
}
