//! Factor stress: a VAR(1) fitted to principal-component scores, a shock
//! pushed through A^h, and the symmetric-proxy exponential alongside.
//!
//! cargo run --release --example stress_propagation

use nalgebra::{DMatrix, DVector};
use qfinkit::numerics::RandomStream;
use qfinkit::risk::{
    fit_var1, principal_factors, proxy_exponential, stress_propagate_classical, stress_propagate_quantum_inspired,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // persistent two-driver returns so the VAR has something to find
    let mut rng = RandomStream::new(9, 0);
    let (t, d) = (1500, 5);
    let mut drivers = [0.0f64; 2];
    let mut returns = DMatrix::zeros(t, d);
    for r in 0..t {
        drivers[0] = 0.8 * drivers[0] + 0.01 * rng.normal();
        drivers[1] = 0.5 * drivers[1] + 0.006 * rng.normal();
        for c in 0..d {
            let (a, b) = (1.0 - 0.15 * c as f64, 0.2 * c as f64 - 0.4);
            returns[(r, c)] = a * drivers[0] + b * drivers[1] + 0.002 * rng.normal();
        }
    }

    let factors = principal_factors(&returns, 3)?;
    let sys = fit_var1(&factors)?;
    println!("fitted A:\n{:.3}", sys.a);

    let f0 = DVector::from_iterator(3, factors.row(t - 1).iter().copied());
    let shock = DVector::from_vec(vec![-0.05, 0.0, 0.0]);
    println!(" h   classical A^h(f0 + s)");
    for h in [0, 1, 2, 5, 10] {
        let f = stress_propagate_classical(&sys, &f0, &shock, h)?;
        println!("{h:>2}   {:>9.5} {:>9.5} {:>9.5}", f[0], f[1], f[2]);
    }
    println!("tau  exp(tau H)(f0 + s)");
    for tau in [0.0, 0.5, 1.0, 2.0] {
        let f = stress_propagate_quantum_inspired(&sys, &(&f0 + &shock), tau)?;
        println!("{tau:<4} {:>9.5} {:>9.5} {:>9.5}", f[0], f[1], f[2]);
    }
    let e1 = proxy_exponential(&sys, 1.0)?;
    let e2 = proxy_exponential(&sys, 2.0)?;
    println!("semigroup gap |e(1)e(1) - e(2)| = {:.1e}", (&e1 * &e1 - e2).amax());
    Ok(())
}
