//! Dense-matrix reference implementations. Every gate is an explicit
//! `2^n x 2^n` operator built by Kronecker products, with qubit `q` as
//! bit `q` of the basis index.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `m` on `qubit` of an `n`-qubit register. The leftmost Kronecker factor
/// is the most significant qubit.
pub fn embed(n: usize, qubit: usize, m: &CMat) -> CMat {
    let id = CMat::identity(2, 2);
    let mut out = CMat::identity(1, 1);
    for q in (0..n).rev() {
        out = kron(&out, if q == qubit { m } else { &id });
    }
    out
}

pub fn ry(theta: f64) -> CMat {
    let (s, co) = (0.5 * theta).sin_cos();
    CMat::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)])
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// `exp(-i beta X)`.
pub fn rx_mixer(beta: f64) -> CMat {
    let (s, co) = beta.sin_cos();
    let mis = Complex64::new(0.0, -s);
    CMat::from_row_slice(2, 2, &[c(co), mis, mis, c(co)])
}

/// `diag(1, 1, 1, e^{i phi})` on qubits `a`, `b`, built from projectors.
pub fn controlled_phase(n: usize, a: usize, b: usize, phi: f64) -> CMat {
    let p1 = CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    let both = embed(n, a, &p1) * embed(n, b, &p1);
    let dim = 1 << n;
    CMat::identity(dim, dim) + both * (Complex64::from_polar(1.0, phi) - c(1.0))
}

pub fn diagonal_phase(angles: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        angles.len(),
        angles.iter().map(|&a| Complex64::from_polar(1.0, -a)),
    ))
}

pub fn uniform(n: usize) -> CVec {
    let dim = 1 << n;
    CVec::from_element(dim, c(1.0 / (dim as f64).sqrt()))
}

pub fn zero_state(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[0] = c(1.0);
    v
}

pub fn qaoa_dense(diag: &[f64], gammas: &[f64], betas: &[f64]) -> CVec {
    let n = diag.len().trailing_zeros() as usize;
    let mut v = uniform(n);
    for (&g, &b) in gammas.iter().zip(betas) {
        let angles: Vec<f64> = diag.iter().map(|e| g * e).collect();
        v = diagonal_phase(&angles) * v;
        let mut mixer = CMat::identity(1, 1);
        for _ in 0..n {
            mixer = kron(&mixer, &rx_mixer(b));
        }
        v = &mixer * v;
    }
    v
}

/// Expectation of a diagonal observable: `sum |amp|^2 E`.
pub fn diag_expectation(v: &CVec, diag: &[f64]) -> f64 {
    v.iter().zip(diag).map(|(a, e)| a.norm_sqr() * e).sum()
}

pub fn z_expectation(v: &CVec, n: usize, qubit: usize) -> f64 {
    let z = embed(n, qubit, &pauli_z());
    (v.adjoint() * z * v)[(0, 0)].re
}

/// CZ ring matching the feature map: none for one qubit, a single pair for
/// two, a closed ring otherwise.
pub fn ring(n: usize) -> CMat {
    let dim = 1 << n;
    let mut u = CMat::identity(dim, dim);
    let pairs: Vec<(usize, usize)> = match n {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        _ => (0..n).map(|q| (q, (q + 1) % n)).collect(),
    };
    for (a, b) in pairs {
        u = controlled_phase(n, a, b, std::f64::consts::PI) * u;
    }
    u
}

pub fn feature_state_dense(x: &[f64], n: usize, layers: usize) -> CVec {
    let mut v = zero_state(n);
    for _ in 0..layers {
        for q in 0..n {
            v = embed(n, q, &ry(x.get(q).copied().unwrap_or(0.0))) * v;
        }
        v = ring(n) * v;
    }
    v
}

pub fn to_cvec(amps: &[Complex64]) -> CVec {
    CVec::from_column_slice(amps)
}

pub fn max_diff(a: &CVec, b: &CVec) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
