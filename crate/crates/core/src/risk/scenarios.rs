use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::numerics::{sample_covariance, symmetric_eigendecompose, RandomStream};

use super::{LossSample, RiskError};

const DRAWS_PER_BLOCK: usize = 4096;
const PSD_TOLERANCE: f64 = 1e-6;

/// Correlated return model `R = mu + L Z` with `L = Q Lambda^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub loading: DMatrix<f64>,
}

impl FactorModel {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// Eigenvalues slightly below zero from roundoff are clamped; anything more
/// negative than `1e-6 * max|lambda|` is rejected.
pub fn pca_loading(mu: &DVector<f64>, sigma: &DMatrix<f64>) -> Result<FactorModel, RiskError> {
    if sigma.nrows() != mu.len() {
        return Err(RiskError::DimensionMismatch {
            expected: mu.len(),
            got: sigma.nrows(),
        });
    }
    let eig = symmetric_eigendecompose(sigma)?;
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let mut loading = eig.eigenvectors.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -PSD_TOLERANCE * scale {
            return Err(RiskError::NotPsd(lambda));
        }
        let s = lambda.max(0.0).sqrt();
        loading.column_mut(j).scale_mut(s);
    }
    Ok(FactorModel {
        mu: mu.clone(),
        sigma: sigma.clone(),
        loading,
    })
}

/// `n_draws` rows of `mu + L z`. Blocks of 4096 draws use their own
/// substream so the output does not depend on the thread count.
pub fn simulate_correlated_returns(f: &FactorModel, n_draws: usize, rng: &RandomStream) -> DMatrix<f64> {
    let d = f.dim();
    let blocks = n_draws.div_ceil(DRAWS_PER_BLOCK);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut s = rng.substream(b as u64);
            let len = DRAWS_PER_BLOCK.min(n_draws - b * DRAWS_PER_BLOCK);
            let mut out = Vec::with_capacity(len * d);
            for _ in 0..len {
                let z = DVector::from_vec(s.normals(d));
                out.extend((&f.mu + &f.loading * z).iter());
            }
            out
        })
        .collect();
    DMatrix::from_row_slice(n_draws, d, &chunks.concat())
}

/// `L = -w^T R` per row.
pub fn portfolio_losses(returns: &DMatrix<f64>, w: &[f64]) -> Result<LossSample, RiskError> {
    if returns.ncols() != w.len() {
        return Err(RiskError::DimensionMismatch {
            expected: returns.ncols(),
            got: w.len(),
        });
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(RiskError::WeightsNotNormalised(total));
    }
    let wv = DVector::from_column_slice(w);
    Ok(LossSample {
        losses: (returns * wv).iter().map(|x| -x).collect(),
        origin: "portfolio".into(),
    })
}

/// Scores of the demeaned returns on the top `k` principal directions.
pub fn principal_factors(returns: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>, RiskError> {
    if returns.nrows() < 2 {
        return Err(RiskError::TooFewObservations {
            needed: 2,
            got: returns.nrows(),
        });
    }
    if k == 0 || k > returns.ncols() {
        return Err(RiskError::DimensionMismatch {
            expected: returns.ncols(),
            got: k,
        });
    }
    let (means, cov) = sample_covariance(returns);
    let eig = symmetric_eigendecompose(&cov)?;
    let mut centered = returns.clone();
    for (j, m) in means.iter().enumerate() {
        centered.column_mut(j).add_scalar_mut(-m);
    }
    Ok(centered * eig.eigenvectors.columns(0, k))
}
