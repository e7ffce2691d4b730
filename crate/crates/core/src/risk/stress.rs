use nalgebra::{DMatrix, DVector};

use crate::numerics::symmetric_eigendecompose;

use super::RiskError;

/// Linear factor dynamics `f_{t+1} = A f_t + eta_t` with the symmetric
/// proxy `H = (A + A^T) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressSystem {
    pub a: DMatrix<f64>,
    pub h_tilde: DMatrix<f64>,
}

impl StressSystem {
    pub fn new(a: DMatrix<f64>) -> Result<Self, RiskError> {
        if !a.is_square() {
            return Err(RiskError::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        let h_tilde = (&a + a.transpose()) * 0.5;
        Ok(StressSystem { a, h_tilde })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

/// Least-squares `A` from consecutive rows of `factors`, without intercept.
pub fn fit_var1(factors: &DMatrix<f64>) -> Result<StressSystem, RiskError> {
    let d = factors.ncols();
    if factors.nrows() < d + 1 || d == 0 {
        return Err(RiskError::TooFewObservations {
            needed: d + 1,
            got: factors.nrows(),
        });
    }
    let t = factors.nrows() - 1;
    let x = factors.rows(0, t);
    let y = factors.rows(1, t);
    let xtx = x.transpose() * x;
    let eig = symmetric_eigendecompose(&xtx)?;
    let top = eig.eigenvalues[0];
    let bottom = eig.eigenvalues[d - 1];
    if !(top > 0.0) || bottom <= 1e-12 * top {
        return Err(RiskError::RankDeficient);
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
    let xtx_inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
    // A^T = (X^T X)^{-1} X^T Y
    let a = (xtx_inv * (x.transpose() * y)).transpose();
    StressSystem::new(a)
}

/// `A^h (f0 + shock)`.
pub fn stress_propagate_classical(
    sys: &StressSystem,
    f0: &DVector<f64>,
    shock: &DVector<f64>,
    h: usize,
) -> Result<DVector<f64>, RiskError> {
    check_len(sys, f0.len())?;
    check_len(sys, shock.len())?;
    let mut f = f0 + shock;
    for _ in 0..h {
        f = &sys.a * f;
    }
    Ok(f)
}

/// `exp(tau H)` through the eigendecomposition of the proxy.
pub fn proxy_exponential(sys: &StressSystem, tau: f64) -> Result<DMatrix<f64>, RiskError> {
    let eig = symmetric_eigendecompose(&sys.h_tilde)?;
    let v = &eig.eigenvectors;
    let e = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (tau * l).exp()));
    let m = v * e * v.transpose();
    Ok((&m + m.transpose()) * 0.5)
}

pub fn stress_propagate_quantum_inspired(
    sys: &StressSystem,
    f: &DVector<f64>,
    tau: f64,
) -> Result<DVector<f64>, RiskError> {
    check_len(sys, f.len())?;
    if tau == 0.0 {
        return Ok(f.clone());
    }
    Ok(proxy_exponential(sys, tau)? * f)
}

fn check_len(sys: &StressSystem, got: usize) -> Result<(), RiskError> {
    if got == sys.dim() {
        Ok(())
    } else {
        Err(RiskError::DimensionMismatch {
            expected: sys.dim(),
            got,
        })
    }
}
