use nalgebra::{DMatrix, DVector};

use super::NumericsError;

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: DMatrix<f64>,
    /// Off-diagonal Frobenius norm before the first sweep and after each sweep.
    pub off_diagonal_trace: Vec<f64>,
}

impl SymmetricEigen {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        v * DMatrix::from_diagonal(&self.eigenvalues) * v.transpose()
    }
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition.
///
/// The input is symmetrised before iterating and must be symmetric to
/// within `1e-10 * max(1, max|s_ij|)`. Sweeps stop once the off-diagonal
/// Frobenius norm falls below `1e-12 * ||S||_F`. Each eigenvector is signed
/// so that its largest-magnitude component is positive.
pub fn symmetric_eigendecompose(s: &DMatrix<f64>) -> Result<SymmetricEigen, NumericsError> {
    let (rows, cols) = s.shape();
    if rows != cols {
        return Err(NumericsError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(NumericsError::Empty);
    }
    let n = rows;
    let scale = s.amax().max(1.0);
    let asymmetry = (s - s.transpose()).amax();
    if !(asymmetry <= 1e-10 * scale) {
        return Err(NumericsError::NotSymmetric(asymmetry));
    }

    let mut a = (s + s.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let threshold = 1e-12 * a.norm();
    let mut trace = vec![off_diagonal_norm(&a)];

    let mut sweeps = 0;
    while *trace.last().unwrap() >= threshold && threshold > 0.0 {
        if sweeps == MAX_SWEEPS {
            return Err(NumericsError::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
        trace.push(off_diagonal_norm(&a));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        let lead = col
            .iter()
            .copied()
            .fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if lead < 0.0 {
            col.neg_mut();
        }
        eigenvectors.set_column(dst, &col);
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
        off_diagonal_trace: trace,
    })
}
