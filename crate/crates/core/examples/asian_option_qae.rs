//! Arithmetic Asian call priced three ways: GBM Monte Carlo, exact
//! amplitude readout and shot-based amplitude estimation.
//!
//! cargo run --release --example asian_option_qae

use qfinkit::numerics::RandomStream;
use qfinkit::pricing::{
    exact_amplitude_price, grover_ancilla_probability, mc_price_asian, shot_amplitude_price, simulate_path_averages,
    GbmSpec, PayoffHistogram,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GbmSpec {
        s0: 100.0,
        rate: 0.05,
        sigma: 0.2,
        maturity: 1.0,
        monitoring_dates: 3,
        strike: 100.0,
    };
    let rng = RandomStream::new(2024, 0);

    let mc = mc_price_asian(&spec, 200_000, &rng.substream(0))?;
    println!("monte carlo     {:.4} +/- {:.4}", mc.price, mc.std_error);

    // 128-bin histogram of path averages loaded into a 7+1 qubit register
    let avgs = simulate_path_averages(&spec, 100_000, &rng.substream(1))?;
    let hist = PayoffHistogram::build(&avgs, &spec, 7)?;
    let (exact, est) = exact_amplitude_price(&hist, &spec)?;
    println!(
        "exact amplitude {exact:.4}  (a = {:.5}, B = {:.3})",
        est.a_hat, hist.bound
    );

    for shots in [256u64, 1024, 4096, 16384] {
        let (p, e) = shot_amplitude_price(&hist, &spec, shots, &mut rng.substream(2 + shots))?;
        println!("{shots:>6} shots    {p:.4}  (a = {:.5})", e.a_hat);
    }

    println!("\nGrover powers rotate the ancilla: P(1) after k iterates");
    let theta = est.a_hat.sqrt().asin();
    for k in 0..5 {
        let sim = grover_ancilla_probability(&hist, k)?;
        let law = ((2 * k + 1) as f64 * theta).sin().powi(2);
        println!("  k={k}  simulated {sim:.6}  sin^2((2k+1)theta) {law:.6}");
    }
    Ok(())
}
