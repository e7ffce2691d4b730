use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    Portfolio,
    Price,
    Risk,
    QmlA,
    QmlB,
}

impl CaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseKind::Portfolio => "portfolio",
            CaseKind::Price => "price",
            CaseKind::Risk => "risk",
            CaseKind::QmlA => "qml-a",
            CaseKind::QmlB => "qml-b",
        }
    }
}

/// Flat run configuration. Unknown keys are rejected. `data_dir = None`
/// runs on the built-in synthetic market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub case: CaseKind,
    pub seed: u64,
    pub data_dir: Option<PathBuf>,
    pub date_column: String,
    pub close_column: String,
    pub macro_value_column: String,

    pub tickers: Vec<String>,
    pub trading_days: u32,
    pub risk_aversion: f64,
    pub penalty: f64,
    pub cardinality: usize,
    pub qaoa_depth: usize,
    pub qaoa_restarts: usize,
    pub qaoa_shots: u64,

    pub s0: f64,
    pub rate: f64,
    pub sigma: f64,
    pub maturity: f64,
    pub monitoring_dates: usize,
    pub strike: f64,
    pub bin_exponent: u32,
    pub presample_paths: usize,
    pub mc_paths: usize,
    pub shots: u64,
    pub schedule: Vec<usize>,
    pub shots_per_level: u64,

    pub risk_tickers: Vec<String>,
    pub alpha: f64,
    pub bins: usize,
    pub scenario_draws: usize,
    pub stress_factors: usize,
    pub stress_shock_sd: f64,
    pub stress_horizon: usize,
    pub stress_tau: f64,

    pub qml_ticker: String,
    pub macro_series: Vec<String>,
    /// `None` picks `max(6, feature count)`.
    pub n_qubits: Option<usize>,
    pub encoding_layers: usize,
    pub qnn_layers: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub svm_c: f64,
    pub qsvc_train_cap: usize,
    pub train_fraction: f64,
    pub threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let syn = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
        RunConfig {
            case: CaseKind::Portfolio,
            seed: 7,
            data_dir: None,
            date_column: "date".into(),
            close_column: "close".into(),
            macro_value_column: "value".into(),

            tickers: syn(&["SYN1", "SYN2", "SYN3", "SYN4", "SYN5", "SYN6"]),
            trading_days: 252,
            risk_aversion: 8.0,
            penalty: 15.0,
            cardinality: 3,
            qaoa_depth: 2,
            qaoa_restarts: 8,
            qaoa_shots: 4096,

            s0: 100.0,
            rate: 0.05,
            sigma: 0.2,
            maturity: 1.0,
            monitoring_dates: 3,
            strike: 100.0,
            bin_exponent: 7,
            presample_paths: 100_000,
            mc_paths: 100_000,
            shots: 4096,
            schedule: vec![0, 1, 2, 4, 8],
            shots_per_level: 2000,

            risk_tickers: syn(&["SYN1", "SYN2", "SYN3", "SYN4"]),
            alpha: 0.95,
            bins: 128,
            scenario_draws: 200_000,
            stress_factors: 3,
            stress_shock_sd: -3.0,
            stress_horizon: 5,
            stress_tau: 1.0,

            qml_ticker: "SYNIDX".into(),
            macro_series: syn(&["RATE", "CPI", "PROD"]),
            n_qubits: None,
            encoding_layers: 1,
            qnn_layers: 3,
            epochs: 60,
            learning_rate: 0.5,
            svm_c: 1.0,
            qsvc_train_cap: 400,
            train_fraction: 0.7,
            threshold: 0.5,
        }
    }
}

/// JSON Schema of the configuration file.
pub const CONFIG_SCHEMA: &str = include_str!("../../config.schema.json");

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(bad(msg)) };
        check(
            !self.tickers.is_empty() && self.tickers.len() <= 16,
            "tickers: 1 to 16 names",
        )?;
        check(self.trading_days > 0, "trading_days must be positive")?;
        check(self.risk_aversion >= 0.0, "risk_aversion must be non-negative")?;
        check(self.penalty > 0.0, "penalty must be positive")?;
        check(
            self.cardinality >= 1 && self.cardinality <= self.tickers.len(),
            "cardinality must lie in 1..=len(tickers)",
        )?;
        check((1..=10).contains(&self.qaoa_depth), "qaoa_depth must lie in 1..=10")?;
        check(
            (1..=64).contains(&self.qaoa_restarts),
            "qaoa_restarts must lie in 1..=64",
        )?;
        check(self.qaoa_shots >= 1, "qaoa_shots must be positive")?;

        check(self.s0 > 0.0, "s0 must be positive")?;
        check(self.rate.is_finite(), "rate must be finite")?;
        check(self.sigma >= 0.0, "sigma must be non-negative")?;
        check(self.maturity > 0.0, "maturity must be positive")?;
        check(self.monitoring_dates >= 1, "monitoring_dates must be positive")?;
        check(self.strike >= 0.0, "strike must be non-negative")?;
        check((1..=12).contains(&self.bin_exponent), "bin_exponent must lie in 1..=12")?;
        check(self.presample_paths >= 2, "presample_paths must be at least 2")?;
        check(self.mc_paths >= 2, "mc_paths must be at least 2")?;
        check(self.shots >= 1, "shots must be positive")?;
        check(!self.schedule.is_empty(), "schedule must not be empty")?;
        check(
            self.schedule.iter().all(|&k| k <= 64),
            "schedule entries must not exceed 64",
        )?;
        check(self.shots_per_level >= 1, "shots_per_level must be positive")?;

        check(
            !self.risk_tickers.is_empty() && self.risk_tickers.len() <= 16,
            "risk_tickers: 1 to 16 names",
        )?;
        check(self.alpha > 0.0 && self.alpha < 1.0, "alpha must lie in (0, 1)")?;
        check((1..=4096).contains(&self.bins), "bins must lie in 1..=4096")?;
        check(self.scenario_draws >= 2, "scenario_draws must be at least 2")?;
        check(
            self.stress_factors >= 1 && self.stress_factors <= self.risk_tickers.len(),
            "stress_factors must lie in 1..=len(risk_tickers)",
        )?;
        check(self.stress_shock_sd.is_finite(), "stress_shock_sd must be finite")?;
        check(self.stress_tau.is_finite(), "stress_tau must be finite")?;

        check(!self.qml_ticker.is_empty(), "qml_ticker must be set")?;
        check(
            self.n_qubits.is_none_or(|n| (1..=12).contains(&n)),
            "n_qubits must lie in 1..=12",
        )?;
        check(self.encoding_layers >= 1, "encoding_layers must be positive")?;
        check(self.qnn_layers >= 1, "qnn_layers must be positive")?;
        check(self.learning_rate >= 0.0, "learning_rate must be non-negative")?;
        check(self.svm_c > 0.0, "svm_c must be positive")?;
        check(self.qsvc_train_cap >= 2, "qsvc_train_cap must be at least 2")?;
        check(
            self.train_fraction > 0.0 && self.train_fraction < 1.0,
            "train_fraction must lie in (0, 1)",
        )?;
        check(
            self.threshold > 0.0 && self.threshold < 1.0,
            "threshold must lie in (0, 1)",
        )?;
        Ok(())
    }
}
