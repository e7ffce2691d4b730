use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::statevector::QuantumRegister;

use super::QmlError;

pub const MAX_FEATURE_QUBITS: usize = 12;
/// Default kernel budget on training rows.
pub const MAX_QSVC_TRAIN: usize = 400;

/// Angle encoding `RY(x_q)` on each qubit followed by a ring of CZ
/// couplings, repeated `encoding_layers` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMapSpec {
    pub n_qubits: usize,
    pub encoding_layers: usize,
}

impl Default for FeatureMapSpec {
    fn default() -> Self {
        FeatureMapSpec {
            n_qubits: 6,
            encoding_layers: 1,
        }
    }
}

impl FeatureMapSpec {
    pub fn validate(&self) -> Result<(), QmlError> {
        if self.n_qubits == 0 || self.n_qubits > MAX_FEATURE_QUBITS {
            return Err(QmlError::InvalidConfig("feature qubits must be in 1..=12"));
        }
        if self.encoding_layers == 0 {
            return Err(QmlError::InvalidConfig("at least one encoding layer is required"));
        }
        Ok(())
    }
}

/// Pairs coupled by the entangling ring.
pub(crate) fn ring_pairs(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        _ => (0..n).map(|q| (q, (q + 1) % n)).collect(),
    }
}

pub(crate) fn apply_ring(state: &mut QuantumRegister) -> Result<(), QmlError> {
    for (a, b) in ring_pairs(state.n_qubits()) {
        state.apply_controlled_phase(a, b, PI)?;
    }
    Ok(())
}

/// Features beyond `n_qubits` are dropped, missing ones read as zero.
pub fn quantum_feature_state(x: &[f64], spec: &FeatureMapSpec) -> Result<QuantumRegister, QmlError> {
    spec.validate()?;
    let mut state = QuantumRegister::zero(spec.n_qubits)?;
    for _ in 0..spec.encoding_layers {
        for q in 0..spec.n_qubits {
            let angle = x.get(q).copied().unwrap_or(0.0);
            if angle != 0.0 {
                state.apply_ry(q, angle)?;
            }
        }
        apply_ring(&mut state)?;
    }
    Ok(state)
}

/// Fidelity `|<phi(x1)|phi(x2)>|^2`.
pub fn quantum_kernel(x1: &[f64], x2: &[f64], spec: &FeatureMapSpec) -> Result<f64, QmlError> {
    let a = quantum_feature_state(x1, spec)?;
    let b = quantum_feature_state(x2, spec)?;
    Ok(fidelity(&a, &b))
}

fn fidelity(a: &QuantumRegister, b: &QuantumRegister) -> f64 {
    let s: num_complex::Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(u, v)| u.conj() * v)
        .sum();
    s.norm_sqr().min(1.0)
}

/// Affine map of each column from its training range onto `[-pi, pi]`.
/// Constant columns map to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl FeatureScaler {
    pub fn fit(x: &DMatrix<f64>) -> Result<Self, QmlError> {
        if x.nrows() == 0 {
            return Err(QmlError::TooFewRows { needed: 1, got: 0 });
        }
        let min = x.column_iter().map(|c| c.min()).collect();
        let max = x.column_iter().map(|c| c.max()).collect();
        Ok(FeatureScaler { min, max })
    }

    pub fn transform(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>, QmlError> {
        if x.ncols() != self.min.len() {
            return Err(QmlError::LengthMismatch {
                expected: self.min.len(),
                got: x.ncols(),
            });
        }
        Ok(DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
            let span = self.max[j] - self.min[j];
            if span > 0.0 {
                -PI + 2.0 * PI * (x[(i, j)] - self.min[j]) / span
            } else {
                0.0
            }
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub row_index: Vec<usize>,
}

impl GramMatrix {
    pub fn from_entries(entries: DMatrix<f64>) -> Self {
        let row_index = (0..entries.nrows()).collect();
        GramMatrix { entries, row_index }
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn row_states(x: &DMatrix<f64>, spec: &FeatureMapSpec) -> Result<Vec<QuantumRegister>, QmlError> {
    (0..x.nrows())
        .into_par_iter()
        .map(|i| {
            let row: Vec<f64> = x.row(i).iter().copied().collect();
            quantum_feature_state(&row, spec)
        })
        .collect()
}

/// Kernel Gram matrix over the rows of `x`, capped at [`MAX_QSVC_TRAIN`].
pub fn gram_matrix(x: &DMatrix<f64>, spec: &FeatureMapSpec) -> Result<GramMatrix, QmlError> {
    gram_matrix_with_cap(x, spec, MAX_QSVC_TRAIN)
}

pub fn gram_matrix_with_cap(x: &DMatrix<f64>, spec: &FeatureMapSpec, cap: usize) -> Result<GramMatrix, QmlError> {
    let n = x.nrows();
    if n > cap {
        return Err(QmlError::CapExceeded { rows: n, cap });
    }
    let states = row_states(x, spec)?;
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| fidelity(&states[i], &states[j])).collect())
        .collect();
    let mut k = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            k[(i, i + off)] = v;
            k[(i + off, i)] = v;
        }
    }
    Ok(GramMatrix::from_entries(k))
}

/// `K[i, j] = k(a_i, b_j)`.
pub fn kernel_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>, spec: &FeatureMapSpec) -> Result<DMatrix<f64>, QmlError> {
    let sa = row_states(a, spec)?;
    let sb = row_states(b, spec)?;
    let rows: Vec<Vec<f64>> = sa
        .par_iter()
        .map(|u| sb.iter().map(|v| fidelity(u, v)).collect())
        .collect();
    Ok(DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| rows[i][j]))
}
