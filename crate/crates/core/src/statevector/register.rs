use std::collections::BTreeMap;

use num_complex::Complex64;

use super::StateError;
use crate::numerics::RandomStream;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 16;

const NORM_TOL: f64 = 1e-12;

/// A normalised state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegister {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
    has_ancilla: bool,
}

pub(crate) fn check_capacity(n_qubits: usize) -> Result<(), StateError> {
    if n_qubits > MAX_QUBITS {
        Err(StateError::Capacity(n_qubits))
    } else {
        Ok(())
    }
}

pub(crate) fn log2_exact(len: usize) -> Result<usize, StateError> {
    if len == 0 || !len.is_power_of_two() {
        return Err(StateError::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

impl QuantumRegister {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, StateError> {
        check_capacity(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(StateError::LengthMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
            has_ancilla: false,
        })
    }

    pub fn zero(n_qubits: usize) -> Result<Self, StateError> {
        Self::basis(n_qubits, 0)
    }

    /// `|+>^n`, the uniform superposition.
    pub fn uniform(n_qubits: usize) -> Result<Self, StateError> {
        check_capacity(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: vec![a; dim],
            has_ancilla: false,
        })
    }

    /// Wraps raw amplitudes, which must already be normalised to 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, has_ancilla: bool) -> Result<Self, StateError> {
        let n_qubits = log2_exact(amplitudes.len())?;
        check_capacity(n_qubits)?;
        if has_ancilla && n_qubits == 0 {
            return Err(StateError::NoAncilla);
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(StateError::NotNormalised(norm));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
            has_ancilla,
        })
    }

    /// Loads `sum_j sqrt(p_j) |j>` with real non-negative amplitudes.
    ///
    /// `p` must have power-of-two length of at least 2 and sum to 1 within
    /// 1e-9; it is renormalised exactly before loading.
    pub fn prepare_from_probabilities(p: &[f64]) -> Result<Self, StateError> {
        let n_qubits = log2_exact(p.len())?;
        if n_qubits == 0 {
            return Err(StateError::NotPowerOfTwo(p.len()));
        }
        check_capacity(n_qubits)?;
        let probs = normalised_probabilities(p)?;
        Ok(Self {
            n_qubits,
            amplitudes: probs.iter().map(|q| Complex64::new(q.sqrt(), 0.0)).collect(),
            has_ancilla: false,
        })
    }

    pub(crate) fn from_parts_unchecked(n_qubits: usize, amplitudes: Vec<Complex64>, has_ancilla: bool) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
            has_ancilla,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn has_ancilla(&self) -> bool {
        self.has_ancilla
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), StateError> {
        if qubit >= self.n_qubits {
            Err(StateError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// `amplitude_x <- exp(-i angles_x) amplitude_x`.
    pub fn apply_diagonal_phase(&mut self, angles: &[f64]) -> Result<(), StateError> {
        if angles.len() != self.dim() {
            return Err(StateError::LengthMismatch {
                expected: self.dim(),
                got: angles.len(),
            });
        }
        for (a, &phi) in self.amplitudes.iter_mut().zip(angles) {
            let before = a.norm_sqr();
            *a *= Complex64::from_polar(1.0, -phi);
            debug_assert!((a.norm_sqr() - before).abs() <= 1e-12);
        }
        Ok(())
    }

    /// `exp(-i beta X)` on every qubit except the ancilla.
    pub fn apply_mixer_rotation(&mut self, beta: f64) {
        let c = Complex64::new(beta.cos(), 0.0);
        let mis = Complex64::new(0.0, -beta.sin());
        let first = usize::from(self.has_ancilla);
        for q in first..self.n_qubits {
            self.apply_single_qubit(q, [[c, mis], [mis, c]]);
        }
    }

    /// `RY(theta) = exp(-i theta Y / 2)` on `qubit`.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<(), StateError> {
        self.check_qubit(qubit)?;
        let (s, c) = (0.5 * theta).sin_cos();
        let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
        self.apply_single_qubit(qubit, [[c, -s], [s, c]]);
        Ok(())
    }

    /// Pauli X on `qubit`.
    pub fn apply_x(&mut self, qubit: usize) -> Result<(), StateError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        for i in 0..self.dim() {
            if i & bit == 0 {
                self.amplitudes.swap(i, i | bit);
            }
        }
        Ok(())
    }

    /// Multiplies `|..1..1..>` (both `a` and `b` set) by `exp(i phi)`.
    pub fn apply_controlled_phase(&mut self, a: usize, b: usize, phi: f64) -> Result<(), StateError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let mask = (1usize << a) | (1usize << b);
        let phase = Complex64::from_polar(1.0, phi);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= phase;
            }
        }
        Ok(())
    }

    fn apply_single_qubit(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << qubit;
        for i in 0..self.dim() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `<Z_qubit>`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64, StateError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & bit == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }

    /// `sum_x |amp_x|^2 diag_x`.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> Result<f64, StateError> {
        if diag.len() != self.dim() {
            return Err(StateError::LengthMismatch {
                expected: self.dim(),
                got: diag.len(),
            });
        }
        Ok(self.amplitudes.iter().zip(diag).map(|(a, e)| a.norm_sqr() * e).sum())
    }

    /// Probability of reading the ancilla (bit 0) as `|1>`.
    pub fn ancilla_one_probability(&self) -> Result<f64, StateError> {
        if !self.has_ancilla {
            return Err(StateError::NoAncilla);
        }
        let p: f64 = self.amplitudes.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Multinomial measurement of every qubit, `shots` times.
    pub fn sample_counts(&self, shots: u64, rng: &mut RandomStream) -> Result<BTreeMap<usize, u64>, StateError> {
        if shots == 0 {
            return Err(StateError::ZeroShots);
        }
        let mut cumulative = Vec::with_capacity(self.dim());
        let mut acc = 0.0;
        for a in &self.amplitudes {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        let last_occupied = self.amplitudes.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.uniform() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(last_occupied);
            *counts.entry(idx).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &QuantumRegister) -> Result<Complex64, StateError> {
        if self.dim() != other.dim() {
            return Err(StateError::LengthMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

pub(crate) fn normalised_probabilities(p: &[f64]) -> Result<Vec<f64>, StateError> {
    for (index, &value) in p.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(StateError::NegativeProbability { index, value });
        }
    }
    let sum: f64 = p.iter().sum();
    if !((sum - 1.0).abs() <= 1e-9) {
        return Err(StateError::NotNormalised(sum));
    }
    Ok(p.iter().map(|x| x / sum).collect())
}
