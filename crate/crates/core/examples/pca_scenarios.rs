//! Correlated return scenarios from a PCA loading, and the tail risk of an
//! equal-weight book under them.
//!
//! cargo run --release --example pca_scenarios

use nalgebra::{DMatrix, DVector};
use qfinkit::numerics::{sample_covariance, RandomStream};
use qfinkit::risk::{
    build_loss_grid, grid_risk_measures, historical_var_cvar, pca_loading, portfolio_losses,
    simulate_correlated_returns,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vols = [0.012, 0.018, 0.010, 0.015];
    let corr = [
        [1.0, 0.6, 0.3, 0.4],
        [0.6, 1.0, 0.2, 0.5],
        [0.3, 0.2, 1.0, 0.1],
        [0.4, 0.5, 0.1, 1.0],
    ];
    let sigma = DMatrix::from_fn(4, 4, |i, j| corr[i][j] * vols[i] * vols[j]);
    let mu = DVector::from_vec(vec![0.0004, 0.0006, 0.0002, 0.0003]);
    let model = pca_loading(&mu, &sigma)?;
    let err = (&model.loading * model.loading.transpose() - &sigma).amax();
    println!("max |L L' - Sigma| = {err:.2e}");

    let draws = simulate_correlated_returns(&model, 200_000, &RandomStream::new(3, 0));
    let (_, cov) = sample_covariance(&draws);
    println!(
        "relative Frobenius error of the sample covariance: {:.3}%",
        100.0 * (&cov - &sigma).norm() / sigma.norm()
    );

    let w = [0.25; 4];
    let losses = portfolio_losses(&draws, &w)?;
    let h = historical_var_cvar(&losses, 0.99)?;
    let g = grid_risk_measures(&build_loss_grid(&losses, 256)?, 0.99)?;
    println!(
        "99% VaR {:.5}  CVaR {:.5}  (grid: {:.5} / {:.5})",
        h.var, h.cvar, g.var, g.cvar
    );
    Ok(())
}
