//! Shared numerical building blocks: reproducible random streams, standard
//! normal distribution functions, a Nelder-Mead simplex minimiser and a
//! Jacobi eigensolver for symmetric matrices.

mod eigen;
mod normal;
mod rng;
mod simplex;
mod stats;

pub use eigen::{symmetric_eigendecompose, SymmetricEigen};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
pub use rng::RandomStream;
pub use simplex::{simplex_minimize, SimplexConfig, SimplexResult};
pub use stats::{mean, sample_covariance, sample_std};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("empty input")]
    Empty,
    #[error("invalid simplex configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}
