use num_complex::Complex64;

use super::register::{check_capacity, log2_exact, normalised_probabilities};
use super::{QuantumRegister, StateError};

/// Probability distribution over `2^m` bins together with the normalised
/// payoff attached to each bin. Defines the loading operator `A` whose
/// payoff ancilla reads `|1>` with probability `sum_j p_j f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationOracle {
    probabilities: Vec<f64>,
    payoffs: Vec<f64>,
}

const PAYOFF_SLACK: f64 = 1e-9;

impl PreparationOracle {
    /// Validates and stores the oracle. Probabilities must be non-negative
    /// and sum to 1 within 1e-9 (they are renormalised); payoffs within
    /// 1e-9 of `[0, 1]` are clamped, anything further out is rejected.
    pub fn new(probabilities: &[f64], payoffs: &[f64]) -> Result<Self, StateError> {
        if probabilities.len() != payoffs.len() {
            return Err(StateError::LengthMismatch {
                expected: probabilities.len(),
                got: payoffs.len(),
            });
        }
        let m = log2_exact(probabilities.len())?;
        check_capacity(m + 1)?;
        let probabilities = normalised_probabilities(probabilities)?;
        let payoffs = payoffs
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value.is_finite() && (-PAYOFF_SLACK..=1.0 + PAYOFF_SLACK).contains(&value) {
                    Ok(value.clamp(0.0, 1.0))
                } else {
                    Err(StateError::InvalidPayoff { index, value })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { probabilities, payoffs })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn n_bins(&self) -> usize {
        self.probabilities.len()
    }

    /// `a = sum_j p_j f_j`, computed classically.
    pub fn target_amplitude(&self) -> f64 {
        self.probabilities.iter().zip(&self.payoffs).map(|(p, f)| p * f).sum()
    }
}

/// `A|0>`: loads `sqrt(p_j)|j>` on the data qubits and rotates the ancilla
/// to `sqrt(1 - f_j)|0> + sqrt(f_j)|1>` for each bin `j`.
pub fn attach_payoff_ancilla(oracle: &PreparationOracle) -> QuantumRegister {
    let n_bins = oracle.n_bins();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n_bins];
    for (j, (&p, &f)) in oracle.probabilities.iter().zip(&oracle.payoffs).enumerate() {
        let r = p.sqrt();
        amps[2 * j] = Complex64::new(r * (1.0 - f).sqrt(), 0.0);
        amps[2 * j + 1] = Complex64::new(r * f.sqrt(), 0.0);
    }
    let n_qubits = n_bins.trailing_zeros() as usize + 1;
    QuantumRegister::from_parts_unchecked(n_qubits, amps, true)
}

/// `Q^k A|0>` with the Grover iterate `Q = -(I - 2|psi><psi|)(I - 2 Pi)`,
/// where `|psi> = A|0>` and `Pi` projects onto ancilla `|1>`.
///
/// `A S_0 A^dagger = I - 2|psi><psi|`, so this is the usual
/// `-A S_0 A^dagger S_chi` without inverting the loader. Each application
/// rotates by `2 theta` in the plane spanned by the good and bad components.
pub fn grover_power(oracle: &PreparationOracle, k: usize) -> QuantumRegister {
    let psi = attach_payoff_ancilla(oracle);
    let mut state = psi.clone();
    for _ in 0..k {
        let v = state.amplitudes_mut();
        for a in v.iter_mut().skip(1).step_by(2) {
            *a = -*a;
        }
        let proj: Complex64 = psi.amplitudes().iter().zip(v.iter()).map(|(p, x)| p.conj() * x).sum();
        for (x, p) in v.iter_mut().zip(psi.amplitudes()) {
            *x = -(*x - 2.0 * proj * p);
        }
    }
    state
}
