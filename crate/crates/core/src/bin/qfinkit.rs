use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qfinkit::harness::{run_case, write_report, CaseKind, HarnessError, RunConfig};

#[derive(Parser)]
#[command(version, about = "Hybrid quantum-classical finance cases on a simulated register")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat JSON config; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory of `<TICKER>.csv` inputs. Omit to use the synthetic market.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "reports")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Exact enumeration and QAOA on the cardinality QUBO.
    Portfolio,
    /// Asian call by Monte Carlo and amplitude estimation.
    Price,
    /// VaR/CVaR, PCA scenarios and factor stress.
    Risk,
    /// Classical and quantum classifiers on one prediction case.
    Qml {
        #[arg(long, value_enum, default_value = "a")]
        case: QmlCase,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QmlCase {
    A,
    B,
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg.case = match cli.command {
        Command::Portfolio => CaseKind::Portfolio,
        Command::Price => CaseKind::Price,
        Command::Risk => CaseKind::Risk,
        Command::Qml { case: QmlCase::A } => CaseKind::QmlA,
        Command::Qml { case: QmlCase::B } => CaseKind::QmlB,
    };
    if let Some(dir) = cli.data_dir {
        cfg.data_dir = Some(dir);
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let bundle = run_case(&cfg)?;
    write_report(&bundle, &cli.out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qfinkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
