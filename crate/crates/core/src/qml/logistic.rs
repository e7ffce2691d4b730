use nalgebra::{DMatrix, DVector};

use super::QmlError;

const RIDGE: f64 = 1e-4;
const MAX_NEWTON: usize = 100;

/// Logistic regression on standardised features, fitted by Newton steps
/// with a small ridge on the slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: DVector<f64>,
    pub intercept: f64,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl LogisticModel {
    fn standardise(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| (x[(i, j)] - self.mean[j]) / self.scale[j])
    }

    pub fn predict_proba(&self, x: &DMatrix<f64>) -> Result<Vec<f64>, QmlError> {
        if x.ncols() != self.weights.len() {
            return Err(QmlError::LengthMismatch {
                expected: self.weights.len(),
                got: x.ncols(),
            });
        }
        let z = self.standardise(x) * &self.weights;
        Ok(z.iter().map(|v| 1.0 / (1.0 + (-(v + self.intercept)).exp())).collect())
    }
}

pub fn logistic_train(x: &DMatrix<f64>, y: &[u8]) -> Result<LogisticModel, QmlError> {
    let (n, d) = x.shape();
    if y.len() != n {
        return Err(QmlError::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if !(y.contains(&0) && y.contains(&1)) {
        return Err(QmlError::SingleClass);
    }
    let mean: Vec<f64> = x.column_iter().map(|c| c.mean()).collect();
    let scale: Vec<f64> = x
        .column_iter()
        .zip(&mean)
        .map(|(c, m)| {
            let s = (c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n as f64).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let mut model = LogisticModel {
        weights: DVector::zeros(d),
        intercept: 0.0,
        mean,
        scale,
    };
    let z = model.standardise(x);
    // design with a leading intercept column
    let a = DMatrix::from_fn(n, d + 1, |i, j| if j == 0 { 1.0 } else { z[(i, j - 1)] });
    let t = DVector::from_iterator(n, y.iter().map(|&v| v as f64));
    let mut beta = DVector::<f64>::zeros(d + 1);
    for _ in 0..MAX_NEWTON {
        let p = (&a * &beta).map(|v| 1.0 / (1.0 + (-v).exp()));
        let mut grad = a.transpose() * (&p - &t);
        let mut hess = DMatrix::<f64>::zeros(d + 1, d + 1);
        for i in 0..n {
            let wi = p[i] * (1.0 - p[i]);
            let row = a.row(i);
            hess += wi * row.transpose() * row;
        }
        for j in 1..=d {
            grad[j] += RIDGE * n as f64 * beta[j];
            hess[(j, j)] += RIDGE * n as f64;
        }
        hess[(0, 0)] += 1e-12;
        let Some(chol) = hess.cholesky() else {
            return Err(QmlError::InvalidConfig("logistic Hessian is singular"));
        };
        let step = chol.solve(&grad);
        beta -= &step;
        if step.amax() < 1e-10 {
            break;
        }
    }
    model.intercept = beta[0];
    model.weights = beta.rows(1, d).into_owned();
    Ok(model)
}
