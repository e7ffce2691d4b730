//! Variational classifier on an XOR pattern, trained with parameter-shift
//! gradients. Also compares one gradient against finite differences.
//!
//! cargo run --release --example qnn_parameter_shift

use std::f64::consts::FRAC_PI_2;

use qfinkit::numerics::RandomStream;
use qfinkit::qml::{
    parameter_shift_gradient, qnn_expectation, qnn_forward, qnn_train, FeatureMapSpec, QnnConfig, QnnModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RandomStream::new(123, 0);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..40 {
        let (sx, sy) = (
            if i % 2 == 0 { 1.0 } else { -1.0 },
            if (i / 2) % 2 == 0 { 1.0 } else { -1.0 },
        );
        rows.push(vec![
            sx * FRAC_PI_2 + 0.3 * rng.normal(),
            sy * FRAC_PI_2 + 0.3 * rng.normal(),
        ]);
        y.push(u8::from(sx * sy > 0.0));
    }
    let spec = FeatureMapSpec {
        n_qubits: 2,
        encoding_layers: 1,
    };

    let probe = QnnModel::random(3, &spec, &mut RandomStream::new(1, 0));
    let grad = parameter_shift_gradient(&rows[0], &probe, &spec)?;
    let h = 1e-6;
    let mut worst = 0.0f64;
    for (k, g) in grad.iter().enumerate() {
        let (mut up, mut dn) = (probe.clone(), probe.clone());
        up.theta[k] += h;
        dn.theta[k] -= h;
        let fd = (qnn_expectation(&rows[0], &up, &spec)? - qnn_expectation(&rows[0], &dn, &spec)?) / (2.0 * h);
        worst = worst.max((fd - g).abs());
    }
    println!("parameter shift vs central difference: max gap {worst:.1e}");

    let cfg = QnnConfig {
        layers: 3,
        epochs: 300,
        learning_rate: 0.5,
    };
    let (model, trace) = qnn_train(&rows, &y, &spec, &cfg, &mut RandomStream::new(4, 0))?;
    for e in [0, 10, 50, 100, trace.losses.len() - 1] {
        println!("epoch {e:>3}  loss {:.4}", trace.losses[e]);
    }
    let mut correct = 0;
    for (x, &t) in rows.iter().zip(&y) {
        let (_, p) = qnn_forward(x, &model, &spec)?;
        correct += usize::from(u8::from(p >= 0.5) == t);
    }
    println!("train accuracy {}/{}", correct, rows.len());
    Ok(())
}
