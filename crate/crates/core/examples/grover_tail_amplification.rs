//! Boosting a rare loss event with Grover iterates on the loss grid.
//!
//! cargo run --release --example grover_tail_amplification

use qfinkit::numerics::RandomStream;
use qfinkit::risk::{
    build_loss_grid, grid_probability, grover_tail_boost, grover_tail_boost_simulated, LossSample, Side,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RandomStream::new(5, 0);
    // fat-ish tail: normal body plus occasional jumps
    let losses: Vec<f64> = (0..20_000)
        .map(|_| 0.01 * rng.normal() + if rng.uniform() < 0.02 { 0.05 } else { 0.0 })
        .collect();
    let sample = LossSample {
        losses,
        origin: "jump-diffusion".into(),
    };
    let grid = build_loss_grid(&sample, 64)?;
    let threshold = 0.04;
    let p = grid_probability(&grid, threshold, Side::Tail);
    println!("P(L >= {threshold}) on the grid = {p:.5}");
    let best_m = ((std::f64::consts::PI / (4.0 * p.sqrt().asin())) - 0.5).floor() as usize;
    println!("optimal iterate count about {best_m}\n");
    println!(" m   closed form   simulated");
    for m in 0..=best_m + 2 {
        let law = grover_tail_boost(p, m)?;
        let sim = grover_tail_boost_simulated(&grid, threshold, m)?;
        println!("{m:>2}   {law:.6}      {sim:.6}");
    }
    Ok(())
}
