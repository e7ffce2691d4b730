use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::numerics::RandomStream;

use super::feature_map::apply_ring;
use super::{quantum_feature_state, FeatureMapSpec, QmlError};

const PROB_CLAMP: f64 = 1e-12;
const MAX_BACKTRACKS: usize = 30;

/// Variational classifier: feature embedding, `layers` blocks of `RY`
/// rotations and a CZ ring, `<Z_0>` readout, logistic link.
#[derive(Debug, Clone, PartialEq)]
pub struct QnnModel {
    /// Layer-major: `theta[l * n_qubits + q]`.
    pub theta: Vec<f64>,
    pub layers: usize,
    pub w: f64,
    pub b: f64,
}

impl QnnModel {
    pub fn zeros(layers: usize, spec: &FeatureMapSpec) -> Self {
        QnnModel {
            theta: vec![0.0; layers * spec.n_qubits],
            layers,
            w: 1.0,
            b: 0.0,
        }
    }

    pub fn random(layers: usize, spec: &FeatureMapSpec, rng: &mut RandomStream) -> Self {
        let theta = (0..layers * spec.n_qubits)
            .map(|_| rng.uniform_range(-std::f64::consts::PI, std::f64::consts::PI))
            .collect();
        QnnModel {
            theta,
            layers,
            w: 1.0,
            b: 0.0,
        }
    }

    fn check(&self, spec: &FeatureMapSpec) -> Result<(), QmlError> {
        if self.theta.len() != self.layers * spec.n_qubits {
            return Err(QmlError::LengthMismatch {
                expected: self.layers * spec.n_qubits,
                got: self.theta.len(),
            });
        }
        Ok(())
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn expectation_with(x: &[f64], theta: &[f64], layers: usize, spec: &FeatureMapSpec) -> Result<f64, QmlError> {
    let mut state = quantum_feature_state(x, spec)?;
    let n = spec.n_qubits;
    for l in 0..layers {
        for q in 0..n {
            state.apply_ry(q, theta[l * n + q])?;
        }
        apply_ring(&mut state)?;
    }
    Ok(state.expectation_z(0)?.clamp(-1.0, 1.0))
}

/// `<Z_0>` of the ansatz state.
pub fn qnn_expectation(x: &[f64], model: &QnnModel, spec: &FeatureMapSpec) -> Result<f64, QmlError> {
    model.check(spec)?;
    expectation_with(x, &model.theta, model.layers, spec)
}

/// `(<Z_0>, sigmoid(w <Z_0> + b))`.
pub fn qnn_forward(x: &[f64], model: &QnnModel, spec: &FeatureMapSpec) -> Result<(f64, f64), QmlError> {
    let f = qnn_expectation(x, model, spec)?;
    Ok((f, sigmoid(model.w * f + model.b)))
}

/// `d<Z_0>/d theta_k = (f(theta_k + pi/2) - f(theta_k - pi/2)) / 2`.
pub fn parameter_shift_gradient(x: &[f64], model: &QnnModel, spec: &FeatureMapSpec) -> Result<Vec<f64>, QmlError> {
    model.check(spec)?;
    let mut theta = model.theta.clone();
    (0..theta.len())
        .map(|k| {
            let orig = theta[k];
            theta[k] = orig + FRAC_PI_2;
            let plus = expectation_with(x, &theta, model.layers, spec)?;
            theta[k] = orig - FRAC_PI_2;
            let minus = expectation_with(x, &theta, model.layers, spec)?;
            theta[k] = orig;
            Ok(0.5 * (plus - minus))
        })
        .collect()
}

/// Mean binary cross-entropy.
pub fn bce_loss(rows: &[Vec<f64>], y: &[u8], model: &QnnModel, spec: &FeatureMapSpec) -> Result<f64, QmlError> {
    let terms: Vec<f64> = rows
        .par_iter()
        .zip(y)
        .map(|(x, &t)| {
            let p = qnn_forward(x, model, spec)?.1.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            Ok(if t == 1 { -p.ln() } else { -(1.0 - p).ln() })
        })
        .collect::<Result<_, QmlError>>()?;
    Ok(terms.iter().sum::<f64>() / rows.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QnnConfig {
    pub layers: usize,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for QnnConfig {
    fn default() -> Self {
        QnnConfig {
            layers: 3,
            epochs: 100,
            learning_rate: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QnnTrace {
    /// Loss before training, then after each epoch.
    pub losses: Vec<f64>,
    pub epochs_run: usize,
}

fn check_labels(rows: &[Vec<f64>], y: &[u8]) -> Result<(), QmlError> {
    if rows.len() != y.len() {
        return Err(QmlError::LengthMismatch {
            expected: rows.len(),
            got: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&v| v > 1) {
        return Err(QmlError::InvalidLabel(bad as f64));
    }
    if !(y.contains(&0) && y.contains(&1)) {
        return Err(QmlError::SingleClass);
    }
    Ok(())
}

/// Random initial angles from `rng`, then [`qnn_train_from`].
pub fn qnn_train(
    rows: &[Vec<f64>],
    y: &[u8],
    spec: &FeatureMapSpec,
    cfg: &QnnConfig,
    rng: &mut RandomStream,
) -> Result<(QnnModel, QnnTrace), QmlError> {
    check_labels(rows, y)?;
    let init = QnnModel::random(cfg.layers, spec, rng);
    qnn_train_from(init, rows, y, spec, cfg)
}

/// Full-batch gradient descent on the cross-entropy. A step that would
/// raise the loss is halved until it does not, so the loss never increases.
pub fn qnn_train_from(
    init: QnnModel,
    rows: &[Vec<f64>],
    y: &[u8],
    spec: &FeatureMapSpec,
    cfg: &QnnConfig,
) -> Result<(QnnModel, QnnTrace), QmlError> {
    check_labels(rows, y)?;
    init.check(spec)?;
    if !(cfg.learning_rate >= 0.0) {
        return Err(QmlError::InvalidConfig("learning rate must be non-negative"));
    }
    let mut model = init;
    let mut loss = bce_loss(rows, y, &model, spec)?;
    let mut losses = vec![loss];
    let m = rows.len() as f64;
    for _ in 0..cfg.epochs {
        let per_row: Vec<(Vec<f64>, f64, f64)> = rows
            .par_iter()
            .zip(y)
            .map(|(x, &t)| {
                let (f, p) = qnn_forward(x, &model, spec)?;
                let dz = p - t as f64;
                let shift = parameter_shift_gradient(x, &model, spec)?;
                Ok((shift.iter().map(|s| dz * model.w * s).collect(), dz * f, dz))
            })
            .collect::<Result<_, QmlError>>()?;
        let mut g_theta = vec![0.0; model.theta.len()];
        let (mut g_w, mut g_b) = (0.0, 0.0);
        for (gt, gw, gb) in per_row {
            for (g, v) in g_theta.iter_mut().zip(gt) {
                *g += v;
            }
            g_w += gw;
            g_b += gb;
        }
        let mut step = cfg.learning_rate;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            if step == 0.0 {
                break;
            }
            let trial = QnnModel {
                theta: model
                    .theta
                    .iter()
                    .zip(&g_theta)
                    .map(|(t, g)| t - step * g / m)
                    .collect(),
                layers: model.layers,
                w: model.w - step * g_w / m,
                b: model.b - step * g_b / m,
            };
            let trial_loss = bce_loss(rows, y, &trial, spec)?;
            if trial_loss <= loss {
                accepted = Some((trial, trial_loss));
                break;
            }
            step *= 0.5;
        }
        if let Some((trial, trial_loss)) = accepted {
            model = trial;
            loss = trial_loss;
        }
        losses.push(loss);
    }
    Ok((
        model,
        QnnTrace {
            epochs_run: cfg.epochs,
            losses,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a.kronecker(b)
    }

    /// Full operator on `n` qubits, qubit `q` acting as bit `q`.
    fn single(n: usize, q: usize, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let id = DMatrix::<Complex64>::identity(2, 2);
        let mut out = DMatrix::<Complex64>::identity(1, 1);
        for k in (0..n).rev() {
            out = kron(&out, if k == q { m } else { &id });
        }
        out
    }

    fn ry(t: f64) -> DMatrix<Complex64> {
        let (s, c) = (0.5 * t).sin_cos();
        DMatrix::from_row_slice(2, 2, &[c, -s, s, c].map(|v| Complex64::new(v, 0.0)))
    }

    fn cz(n: usize, a: usize, b: usize) -> DMatrix<Complex64> {
        let dim = 1 << n;
        DMatrix::from_fn(dim, dim, |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    fn dense_expectation(x: &[f64], m: &QnnModel, spec: &FeatureMapSpec) -> f64 {
        let n = spec.n_qubits;
        let dim = 1 << n;
        let mut psi = DMatrix::<Complex64>::zeros(dim, 1);
        psi[0] = Complex64::new(1.0, 0.0);
        let ring = |psi: DMatrix<Complex64>| {
            let pairs: Vec<(usize, usize)> = match n {
                1 => vec![],
                2 => vec![(0, 1)],
                _ => (0..n).map(|q| (q, (q + 1) % n)).collect(),
            };
            pairs.iter().fold(psi, |p, &(a, b)| cz(n, a, b) * p)
        };
        for _ in 0..spec.encoding_layers {
            for q in 0..n {
                psi = single(n, q, &ry(x[q])) * psi;
            }
            psi = ring(psi);
        }
        for l in 0..m.layers {
            for q in 0..n {
                psi = single(n, q, &ry(m.theta[l * n + q])) * psi;
            }
            psi = ring(psi);
        }
        (0..dim)
            .map(|i| psi[i].norm_sqr() * if i & 1 == 0 { 1.0 } else { -1.0 })
            .sum()
    }

    fn spec(n: usize) -> FeatureMapSpec {
        FeatureMapSpec {
            n_qubits: n,
            encoding_layers: 1,
        }
    }

    #[test]
    fn zero_model_reads_plus_one() {
        let sp = spec(3);
        let m = QnnModel::zeros(3, &sp);
        assert_eq!(qnn_expectation(&[0.0; 3], &m, &sp).unwrap(), 1.0);
        let flat = QnnModel { w: 0.0, ..m.clone() };
        assert_eq!(qnn_forward(&[1.0, 2.0, 3.0], &flat, &sp).unwrap().1, 0.5);
    }

    #[test]
    fn matches_dense_simulation() {
        let mut rng = RandomStream::new(40, 0);
        for n in 1..=4 {
            let sp = spec(n);
            for _ in 0..5 {
                let m = QnnModel::random(3, &sp, &mut rng);
                let x: Vec<f64> = (0..n).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
                let got = qnn_expectation(&x, &m, &sp).unwrap();
                assert!((got - dense_expectation(&x, &m, &sp)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shift_matches_finite_difference() {
        let mut rng = RandomStream::new(41, 0);
        let sp = spec(3);
        for _ in 0..10 {
            let m = QnnModel::random(2, &sp, &mut rng);
            let x: Vec<f64> = (0..3).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
            let g = parameter_shift_gradient(&x, &m, &sp).unwrap();
            for k in 0..m.theta.len() {
                let mut p = m.clone();
                let h = 1e-5;
                p.theta[k] += h;
                let up = qnn_expectation(&x, &p, &sp).unwrap();
                p.theta[k] -= 2.0 * h;
                let down = qnn_expectation(&x, &p, &sp).unwrap();
                assert!((g[k] - (up - down) / (2.0 * h)).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_extremum() {
        // one qubit: <Z> = cos(x + theta), maximal at theta = -x
        let sp = spec(1);
        let m = QnnModel {
            theta: vec![-0.4],
            layers: 1,
            w: 1.0,
            b: 0.0,
        };
        assert!((qnn_expectation(&[0.4], &m, &sp).unwrap() - 1.0).abs() < 1e-15);
        assert!(parameter_shift_gradient(&[0.4], &m, &sp).unwrap()[0].abs() < 1e-10);
    }

    #[test]
    fn parameter_outside_light_cone_has_zero_gradient() {
        // from a product state the final CZ commutes with Z_0, so qubit 1's angle never reaches the readout
        let sp = spec(2);
        let m = QnnModel {
            theta: vec![0.0, 0.7],
            layers: 1,
            w: 1.0,
            b: 0.0,
        };
        let g = parameter_shift_gradient(&[0.0, 0.0], &m, &sp).unwrap();
        assert!(g[1].abs() < 1e-12);
    }

    #[test]
    fn zero_learning_rate_keeps_parameters() {
        let sp = spec(2);
        let rows = vec![vec![0.1, 0.2], vec![-1.0, 1.0]];
        let y = [0u8, 1];
        let init = QnnModel::random(2, &sp, &mut RandomStream::new(1, 0));
        let cfg = QnnConfig {
            layers: 2,
            epochs: 5,
            learning_rate: 0.0,
        };
        let (m, _) = qnn_train_from(init.clone(), &rows, &y, &sp, &cfg).unwrap();
        assert_eq!(m, init);
        assert!(matches!(
            qnn_train_from(init, &rows, &[1, 1], &sp, &cfg),
            Err(QmlError::SingleClass)
        ));
    }

    #[test]
    fn perfect_start_stays_perfect() {
        // one qubit: <Z> = cos(x); labels follow the sign of cos(x)
        let sp = spec(1);
        let rows: Vec<Vec<f64>> = [-2.5, -2.0, -0.5, 0.0, 0.5, 2.0, 2.5]
            .iter()
            .map(|&v| vec![v])
            .collect();
        let y: Vec<u8> = rows.iter().map(|r| u8::from(r[0].cos() > 0.0)).collect();
        let init = QnnModel {
            theta: vec![0.0],
            layers: 1,
            w: 8.0,
            b: 0.0,
        };
        let cfg = QnnConfig {
            layers: 1,
            epochs: 20,
            learning_rate: 0.5,
        };
        let (m, trace) = qnn_train_from(init, &rows, &y, &sp, &cfg).unwrap();
        assert!(trace.losses.windows(2).all(|w| w[1] <= w[0]));
        for (x, &t) in rows.iter().zip(&y) {
            assert_eq!(u8::from(qnn_forward(x, &m, &sp).unwrap().1 >= 0.5), t);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let sp = spec(2);
        let rows = vec![vec![0.1, 0.2], vec![-1.0, 1.0], vec![2.0, -0.3]];
        let y = [0u8, 1, 1];
        let cfg = QnnConfig {
            layers: 2,
            epochs: 3,
            learning_rate: 0.3,
        };
        let a = qnn_train(&rows, &y, &sp, &cfg, &mut RandomStream::new(9, 0)).unwrap();
        let b = qnn_train(&rows, &y, &sp, &cfg, &mut RandomStream::new(9, 0)).unwrap();
        assert_eq!(a, b);
    }
}
