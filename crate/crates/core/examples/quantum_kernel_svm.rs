//! Fidelity-kernel SVM on two noisy concentric rings.
//!
//! cargo run --release --example quantum_kernel_svm

use nalgebra::DMatrix;
use qfinkit::numerics::RandomStream;
use qfinkit::qml::{gram_matrix, kernel_matrix, svm_predict, svm_train, FeatureMapSpec, FeatureScaler};

fn rings(n: usize, rng: &mut RandomStream) -> (DMatrix<f64>, Vec<f64>) {
    let mut x = DMatrix::zeros(n, 2);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let inner = i % 2 == 0;
        let r = if inner { 0.5 } else { 1.5 } + 0.15 * rng.normal();
        let phi = rng.uniform_range(0.0, std::f64::consts::TAU);
        x[(i, 0)] = r * phi.cos();
        x[(i, 1)] = r * phi.sin();
        y.push(if inner { 1.0 } else { -1.0 });
    }
    (x, y)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RandomStream::new(21, 0);
    let (x_train, y_train) = rings(120, &mut rng);
    let (x_test, y_test) = rings(80, &mut rng);
    let scaler = FeatureScaler::fit(&x_train)?;
    let (a, b) = (scaler.transform(&x_train)?, scaler.transform(&x_test)?);

    let spec = FeatureMapSpec {
        n_qubits: 2,
        encoding_layers: 2,
    };
    let gram = gram_matrix(&a, &spec)?;
    let model = svm_train(&gram, &y_train, 1.0)?;
    println!(
        "{} support vectors, KKT violation {:.1e}, {} pair updates",
        model.support.len(),
        model.kkt_violation,
        model.updates
    );

    let k = kernel_matrix(&b, &a, &spec)?;
    let mut correct = 0;
    for (i, &yi) in y_test.iter().enumerate() {
        let row: Vec<f64> = k.row(i).iter().copied().collect();
        let (_, label) = svm_predict(&model, &row)?;
        correct += usize::from(label == yi);
    }
    println!("test accuracy {:.3}", correct as f64 / y_test.len() as f64);
    Ok(())
}
