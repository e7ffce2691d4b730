//! Runs one configured case on the built-in synthetic market and prints
//! every report table.
//!
//! cargo run --release --example run_case -- risk 7

use qfinkit::harness::{run_case, CaseKind, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let case = match args.next().as_deref().unwrap_or("portfolio") {
        "price" => CaseKind::Price,
        "risk" => CaseKind::Risk,
        "qml-a" => CaseKind::QmlA,
        "qml-b" => CaseKind::QmlB,
        _ => CaseKind::Portfolio,
    };
    let seed = args.next().map_or(Ok(7), |s| s.parse())?;
    let cfg = RunConfig {
        case,
        seed,
        ..RunConfig::default()
    };
    let t = std::time::Instant::now();
    let bundle = run_case(&cfg)?;
    for r in &bundle.reports {
        println!("== {}", r.file_name);
        print!("{}", r.to_csv()?);
    }
    eprintln!("{} finished in {:.2?}", case.as_str(), t.elapsed());
    Ok(())
}
