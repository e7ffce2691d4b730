//! CSV ingestion, case orchestration and report emission.

mod config;
mod format;
mod io;
mod run;
mod synthetic;

pub use config::{CaseKind, RunConfig, CONFIG_SCHEMA};
pub use format::{fmt_g6, fmt_opt};
pub use io::{
    align_closes, forward_fill_align, load_macro_csv, load_price_csv, parse_macro_csv, parse_price_csv, AlignedTable,
    ColumnMap, MacroSeries, PriceSeries,
};
pub use run::{run_case, write_report, InputDigest, Manifest, Report, ReportBundle};
pub use synthetic::{business_days, synthetic_files, ASSETS, INDEX, MACROS, SYNTHETIC_SEED};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    /// 2 config, 3 data or I/O, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Data(_) | HarnessError::Io(_) => 3,
            HarnessError::Numerical(_) => 4,
        }
    }
}
