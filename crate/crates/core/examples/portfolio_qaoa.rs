//! Six-asset cardinality-constrained selection: exact enumeration vs QAOA.
//!
//! cargo run --release --example portfolio_qaoa

use qfinkit::harness::{align_closes, parse_price_csv, synthetic_files, ColumnMap, ASSETS};
use qfinkit::numerics::{RandomStream, SimplexConfig};
use qfinkit::portfolio::{build_cardinality_qubo, enumerate_feasible, estimate_annualized_moments, PortfolioRecord};
use qfinkit::qaoa::{best_feasible, cost_diagonal, optimize_qaoa, qaoa_state, sample_and_rank};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let files = synthetic_files();
    let series = ASSETS
        .iter()
        .map(|t| {
            let body = &files.iter().find(|(f, _)| *f == format!("{t}.csv")).expect("bundled").1;
            parse_price_csv(body.as_bytes(), t, &ColumnMap::prices())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (_, closes) = align_closes(&series)?;
    let tickers: Vec<String> = ASSETS.iter().map(|s| s.to_string()).collect();
    let universe = estimate_annualized_moments(&tickers, &closes, 252)?;

    let (lambda, penalty, k) = (8.0, 15.0, 3);
    let ranked = enumerate_feasible(&universe, lambda, penalty, k)?;
    println!("classical exact, top 5 of {}:", ranked.len());
    for (i, r) in ranked.iter().take(5).enumerate() {
        println!(
            "  {:>2}  {:<16} obj {:.4}  ret {:.3}  vol {:.3}",
            i + 1,
            r.label(&tickers),
            r.penalised_objective,
            r.expected_return,
            r.volatility
        );
    }

    let qubo = build_cardinality_qubo(&universe, lambda, penalty, k)?;
    let diag = cost_diagonal(&qubo)?;
    let rng = RandomStream::new(7, 0);
    let res = optimize_qaoa(&diag, 2, 8, &rng.substream(0), &SimplexConfig::default())?;
    println!(
        "\nQAOA p=2: <H> = {:.4} after {} evaluations",
        res.best_expectation, res.evaluations
    );

    let state = qaoa_state(&res.best_params, &diag)?;
    let samples = sample_and_rank(&state, 4096, &qubo, k, &mut rng.substream(1))?;
    let feasible_mass: f64 = samples.iter().filter(|s| s.feasible).map(|s| s.frequency).sum();
    println!("feasible share of 4096 shots: {:.1}%", 100.0 * feasible_mass);
    if let Some((best, feasible)) = best_feasible(&samples) {
        let rank = ranked.iter().position(|r| r.selection == best.selection).map(|i| i + 1);
        println!(
            "best sampled portfolio: {} (objective {:.4}, seen {} times, feasible {feasible}, exact rank {:?})",
            PortfolioRecord::evaluate(&universe, best.selection.clone(), best.objective).label(&tickers),
            best.objective,
            best.count,
            rank
        );
    }
    Ok(())
}
