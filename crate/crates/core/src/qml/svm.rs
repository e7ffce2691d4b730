use super::{GramMatrix, QmlError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    /// Stop once the maximal KKT violation falls below this.
    pub tol: f64,
    /// One sweep is `n` pair updates.
    pub max_sweeps: usize,
}

impl SvmConfig {
    pub fn new(c: f64) -> Self {
        SvmConfig {
            c,
            tol: 1e-6,
            max_sweeps: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub alphas: Vec<f64>,
    pub labels: Vec<f64>,
    pub bias: f64,
    pub support: Vec<usize>,
    pub c: f64,
    /// Dual objective after each sweep, ending with the final value.
    pub dual_trace: Vec<f64>,
    pub kkt_violation: f64,
    pub updates: usize,
}

impl SvmModel {
    pub fn dual_objective(&self, gram: &GramMatrix) -> f64 {
        dual_objective(&self.alphas, &self.labels, gram)
    }
}

fn dual_objective(alphas: &[f64], y: &[f64], gram: &GramMatrix) -> f64 {
    let k = &gram.entries;
    let n = alphas.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * y[i] * y[j] * k[(i, j)];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

pub fn svm_train(gram: &GramMatrix, y: &[f64], c: f64) -> Result<SvmModel, QmlError> {
    svm_train_with(gram, y, &SvmConfig::new(c))
}

/// Pairwise ascent on the dual with maximal-violating-pair selection.
pub fn svm_train_with(gram: &GramMatrix, y: &[f64], cfg: &SvmConfig) -> Result<SvmModel, QmlError> {
    let n = gram.len();
    if y.len() != n {
        return Err(QmlError::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(QmlError::InvalidLabel(bad));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(QmlError::SingleClass);
    }
    if !(cfg.c > 0.0) || !(cfg.tol > 0.0) || cfg.max_sweeps == 0 {
        return Err(QmlError::InvalidConfig(
            "svm needs C > 0, tol > 0 and at least one sweep",
        ));
    }
    let k = &gram.entries;
    let c = cfg.c;
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];
    let mut alpha = vec![0.0; n];
    // gradient of 0.5 a^T Q a - e^T a
    let mut grad = vec![-1.0; n];
    let mut trace = vec![0.0];
    let max_updates = cfg.max_sweeps.saturating_mul(n);
    let mut updates = 0;
    let mut violation;
    loop {
        let mut up = (usize::MAX, f64::NEG_INFINITY);
        let mut low = (usize::MAX, f64::INFINITY);
        for t in 0..n {
            let v = -y[t] * grad[t];
            let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            if in_up && v > up.1 {
                up = (t, v);
            }
            if in_low && v < low.1 {
                low = (t, v);
            }
        }
        violation = if up.0 == usize::MAX || low.0 == usize::MAX {
            0.0
        } else {
            up.1 - low.1
        };
        if violation < cfg.tol || updates >= max_updates {
            break;
        }
        let (i, j) = (up.0, low.0);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (q(i, i) + q(j, j) + 2.0 * q(i, j)).max(1e-12);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (q(i, i) + q(j, j) - 2.0 * q(i, j)).max(1e-12);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
        updates += 1;
        if updates % n == 0 {
            trace.push(-objective_from_grad(&alpha, &grad));
        }
    }
    trace.push(-objective_from_grad(&alpha, &grad));

    // bias from free vectors, else the midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free_sum, mut free_n) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_sum += yg;
            free_n += 1;
        }
    }
    let rho = if free_n > 0 {
        free_sum / free_n as f64
    } else {
        0.5 * (ub + lb)
    };
    let support = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(SvmModel {
        alphas: alpha,
        labels: y.to_vec(),
        bias: -rho,
        support,
        c,
        dual_trace: trace,
        kkt_violation: violation,
        updates,
    })
}

/// `0.5 a^T Q a - e^T a` from the maintained gradient `Q a - e`.
fn objective_from_grad(alpha: &[f64], grad: &[f64]) -> f64 {
    alpha.iter().zip(grad).map(|(a, g)| 0.5 * a * (g - 1.0)).sum()
}

/// `score = sum_i alpha_i y_i k_i + b`; label +1 on ties.
pub fn svm_predict(model: &SvmModel, kernel_row: &[f64]) -> Result<(f64, f64), QmlError> {
    if kernel_row.len() != model.alphas.len() {
        return Err(QmlError::LengthMismatch {
            expected: model.alphas.len(),
            got: kernel_row.len(),
        });
    }
    let score = model
        .alphas
        .iter()
        .zip(&model.labels)
        .zip(kernel_row)
        .map(|((a, y), k)| a * y * k)
        .sum::<f64>()
        + model.bias;
    Ok((score, if score >= 0.0 { 1.0 } else { -1.0 }))
}
