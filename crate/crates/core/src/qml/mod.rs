//! Quantum feature maps, fidelity kernels with an SVM dual solver, and a
//! variational classifier trained with parameter-shift gradients.
//!
//! Qubit `q` of a feature register is bit `q` of the basis index; these
//! registers carry no ancilla.

mod cases;
mod feature_map;
mod logistic;
mod metrics;
mod qnn;
mod svm;

pub use cases::{
    case_a_dataset, case_b_dataset, chronological_split, evaluate_case, CaseConfig, Dataset, ModelRow, CASE_A_FEATURES,
    CASE_B_FEATURES,
};
pub use feature_map::{
    gram_matrix, gram_matrix_with_cap, kernel_matrix, quantum_feature_state, quantum_kernel, FeatureMapSpec,
    FeatureScaler, GramMatrix, MAX_FEATURE_QUBITS, MAX_QSVC_TRAIN,
};
pub use logistic::{logistic_train, LogisticModel};
pub use metrics::{classification_metrics, Metrics};
pub use qnn::{
    bce_loss, parameter_shift_gradient, qnn_expectation, qnn_forward, qnn_train, qnn_train_from, QnnConfig, QnnModel,
    QnnTrace,
};
pub use svm::{svm_predict, svm_train, svm_train_with, SvmConfig, SvmModel};

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::statevector::StateError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmlError {
    #[error("labels contain a single class")]
    SingleClass,
    #[error("label {0} is not in the expected set")]
    InvalidLabel(f64),
    #[error("{rows} rows exceed the kernel budget of {cap}")]
    CapExceeded { rows: usize, cap: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("chronological split violated: training ends {train_end}, test starts {test_start}")]
    SplitOrder { train_end: String, test_start: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    State(#[from] StateError),
}
