//! Dense complex statevector simulator.
//!
//! Basis index bit `q` is qubit `q`. When a register carries a payoff
//! ancilla it is always qubit 0 (the lowest-order bit), and the "data"
//! qubits occupy bits `1..n`.

mod oracle;
mod register;

pub use oracle::{attach_payoff_ancilla, grover_power, PreparationOracle};
pub use register::{QuantumRegister, MAX_QUBITS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1 within 1e-9")]
    NotNormalised(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} qubits exceeds the simulator capacity of {MAX_QUBITS}")]
    Capacity(usize),
    #[error("register has no payoff ancilla")]
    NoAncilla,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("normalised payoff {value} at index {index} is outside [0, 1]")]
    InvalidPayoff { index: usize, value: f64 },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
}
