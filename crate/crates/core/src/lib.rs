//! Hybrid quantum-classical finance toolkit.
//!
//! Every quantum routine runs on a dense statevector simulator
//! ([`statevector::QuantumRegister`]) and is paired with the classical
//! baseline it is benchmarked against:
//!
//! - [`portfolio`] and [`qaoa`]: cardinality-constrained mean-variance
//!   selection as a QUBO, solved by exact enumeration and by p-layer QAOA.
//! - [`pricing`]: arithmetic Asian options by GBM Monte Carlo and by
//!   amplitude estimation (exact readout, shot readout, maximum likelihood
//!   over a Grover-power schedule).
//! - [`risk`]: VaR/CVaR by historical, parametric and discretised-grid
//!   routes, amplitude-form CVaR, Grover tail boosting, PCA scenario
//!   generation and VAR(1) stress propagation.
//! - [`qml`]: fidelity-kernel SVMs and a variational classifier trained with
//!   parameter-shift gradients.
//! - [`harness`]: CSV ingestion, case orchestration and report emission.
//!
//! [`numerics`] holds the shared random streams, normal distribution
//! functions, the simplex minimiser and the symmetric eigensolver.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod harness;
pub mod numerics;
pub mod portfolio;
pub mod pricing;
pub mod qaoa;
pub mod qml;
pub mod risk;
pub mod statevector;

pub use numerics::RandomStream;
pub use statevector::QuantumRegister;
