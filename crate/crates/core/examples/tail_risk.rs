//! VaR and CVaR of daily losses: historical, normal, and the discretised
//! grid with its amplitude-form CVaR.
//!
//! cargo run --release --example tail_risk

use qfinkit::harness::{parse_price_csv, synthetic_files, ColumnMap};
use qfinkit::numerics::{mean, sample_std};
use qfinkit::risk::{
    build_loss_grid, compute_losses, cvar_from_tail_amplitudes, grid_risk_measures, grid_var_search,
    historical_var_cvar, parametric_normal_var_cvar,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let files = synthetic_files();
    let (_, body) = files.iter().find(|(f, _)| f == "SYN2.csv").expect("bundled");
    let series = parse_price_csv(body.as_bytes(), "SYN2", &ColumnMap::prices())?;
    let losses = compute_losses(&series.closes, "SYN2")?;
    let (mu, sd) = (mean(&losses.losses), sample_std(&losses.losses));
    println!("SYN2: {} daily losses, mean {mu:.5}, sd {sd:.5}\n", losses.losses.len());

    println!("alpha   method       VaR       CVaR");
    for alpha in [0.9, 0.95, 0.99] {
        let h = historical_var_cvar(&losses, alpha)?;
        let p = parametric_normal_var_cvar(mu, sd, alpha)?;
        let g = build_loss_grid(&losses, 128)?;
        let gr = grid_risk_measures(&g, alpha)?;
        let (_, calls) = grid_var_search(&g, alpha)?;
        let amp = cvar_from_tail_amplitudes(&g, gr.var)?;
        println!("{alpha:<6}  historical  {:.5}  {:.5}", h.var, h.cvar);
        println!("{alpha:<6}  normal      {:.5}  {:.5}", p.var, p.cvar);
        println!(
            "{alpha:<6}  grid        {:.5}  {:.5}  (amplitude form {amp:.5}, {calls} CDF queries)",
            gr.var, gr.cvar
        );
    }
    Ok(())
}
