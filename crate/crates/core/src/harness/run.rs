use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{CaseKind, RunConfig};
use super::format::{fmt_g6, fmt_opt};
use super::io::{
    align_closes, forward_fill_align, parse_macro_csv, parse_price_csv, ColumnMap, MacroSeries, PriceSeries,
};
use super::synthetic::synthetic_files;
use super::HarnessError;
use crate::numerics::{mean, sample_covariance, sample_std, RandomStream, SimplexConfig};
use crate::portfolio::{build_cardinality_qubo, enumerate_feasible, estimate_annualized_moments, PortfolioError};
use crate::pricing::{
    exact_amplitude_price, mc_price_asian, mlqae_estimate, price_from_amplitude, shot_amplitude_price,
    simulate_path_averages, GbmSpec, PayoffHistogram, PricingError,
};
use crate::qaoa::{best_feasible, cost_diagonal, optimize_qaoa, qaoa_state, sample_and_rank, QaoaError};
use crate::qml::{
    case_a_dataset, case_b_dataset, chronological_split, evaluate_case, CaseConfig, FeatureMapSpec, QmlError,
    QnnConfig, MAX_FEATURE_QUBITS,
};
use crate::risk::{
    build_loss_grid, compute_losses, cvar_from_tail_amplitudes, fit_var1, grid_risk_measures, historical_var_cvar,
    parametric_normal_var_cvar, pca_loading, portfolio_losses, principal_factors, simulate_correlated_returns,
    stress_propagate_classical, stress_propagate_quantum_inspired, LossSample, RiskError,
};

pub const PORTFOLIO_HEADER: [&str; 6] = ["rank", "selection", "objective", "return", "volatility", "method"];
pub const PRICE_HEADER: [&str; 5] = ["method", "price", "a_hat", "oracle_calls", "stderr"];
pub const RISK_HEADER: [&str; 4] = ["method", "alpha", "var", "cvar"];
pub const STRESS_HEADER: [&str; 5] = ["factor", "initial", "shocked", "classical", "quantum_inspired"];
pub const QML_HEADER: [&str; 6] = ["family", "model", "auc", "accuracy", "balanced_accuracy", "f1"];

/// One CSV table, already formatted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub file_name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    fn new(file_name: &str, header: &[&str]) -> Self {
        Report {
            file_name: file_name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| HarnessError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub case: &'static str,
    pub seed: u64,
    pub data_source: String,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<InputDigest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub reports: Vec<Report>,
    pub manifest: Manifest,
}

impl ReportBundle {
    /// A bundle with no tables; writing it emits only the manifest.
    pub fn empty(cfg: &RunConfig) -> Self {
        ReportBundle {
            reports: Vec::new(),
            manifest: Manifest {
                toolkit: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                case: cfg.case.as_str(),
                seed: cfg.seed,
                data_source: source_label(cfg),
                config: cfg.clone(),
                inputs: Vec::new(),
                outputs: Vec::new(),
            },
        }
    }

    pub fn report(&self, file_name: &str) -> Option<&Report> {
        self.reports.iter().find(|r| r.file_name == file_name)
    }
}

fn source_label(cfg: &RunConfig) -> String {
    match &cfg.data_dir {
        Some(d) => d.display().to_string(),
        None => "synthetic".into(),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl From<PortfolioError> for HarnessError {
    fn from(e: PortfolioError) -> Self {
        match e {
            PortfolioError::TooFewObservations(_)
            | PortfolioError::Misaligned { .. }
            | PortfolioError::NonPositivePrice { .. } => HarnessError::Data(e.to_string()),
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<QaoaError> for HarnessError {
    fn from(e: QaoaError) -> Self {
        HarnessError::Numerical(e.to_string())
    }
}

impl From<PricingError> for HarnessError {
    fn from(e: PricingError) -> Self {
        match e {
            PricingError::InvalidSpec(_) => HarnessError::Config(e.to_string()),
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<RiskError> for HarnessError {
    fn from(e: RiskError) -> Self {
        match e {
            RiskError::EmptySample
            | RiskError::TooFewPrices(_)
            | RiskError::NonPositivePrice { .. }
            | RiskError::TooFewObservations { .. } => HarnessError::Data(e.to_string()),
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<QmlError> for HarnessError {
    fn from(e: QmlError) -> Self {
        match e {
            QmlError::SingleClass
            | QmlError::TooFewRows { .. }
            | QmlError::LengthMismatch { .. }
            | QmlError::SplitOrder { .. } => HarnessError::Data(e.to_string()),
            QmlError::InvalidConfig(_) | QmlError::CapExceeded { .. } => HarnessError::Config(e.to_string()),
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

/// Where input CSVs come from, with a digest of every file read.
struct Inputs {
    dir: Option<PathBuf>,
    synthetic: BTreeMap<String, String>,
    read: Vec<InputDigest>,
}

impl Inputs {
    fn new(cfg: &RunConfig) -> Self {
        Inputs {
            dir: cfg.data_dir.clone(),
            synthetic: if cfg.data_dir.is_none() {
                synthetic_files().into_iter().collect()
            } else {
                BTreeMap::new()
            },
            read: Vec::new(),
        }
    }

    /// `<name>.csv`, else the first `<name>_*.csv` in sorted order.
    fn resolve(dir: &Path, name: &str) -> Result<PathBuf, HarnessError> {
        let exact = dir.join(format!("{name}.csv"));
        if exact.is_file() {
            return Ok(exact);
        }
        let prefix = format!("{name}_");
        let entries = std::fs::read_dir(dir).map_err(|e| HarnessError::Data(format!("{}: {e}", dir.display())))?;
        let mut hits: Vec<PathBuf> = entries
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| {
                let f = p
                    .file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default();
                f.starts_with(&prefix) && f.ends_with(".csv")
            })
            .collect();
        hits.sort();
        hits.into_iter()
            .next()
            .ok_or_else(|| HarnessError::Data(format!("no CSV for {name:?} in {}", dir.display())))
    }

    fn fetch(&mut self, name: &str) -> Result<Vec<u8>, HarnessError> {
        let (file, bytes) = match &self.dir {
            Some(dir) => {
                let path = Self::resolve(dir, name)?;
                let bytes = std::fs::read(&path).map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
                let file = path
                    .file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default();
                (file, bytes)
            }
            None => {
                let file = format!("{name}.csv");
                let body = self
                    .synthetic
                    .get(&file)
                    .ok_or_else(|| HarnessError::Data(format!("no synthetic series named {name:?}")))?;
                (file, body.clone().into_bytes())
            }
        };
        self.read.push(InputDigest {
            file,
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    fn prices(&mut self, name: &str, map: &ColumnMap) -> Result<PriceSeries, HarnessError> {
        let bytes = self.fetch(name)?;
        parse_price_csv(&bytes, name, map)
    }

    fn macro_series(&mut self, name: &str, map: &ColumnMap) -> Result<MacroSeries, HarnessError> {
        let bytes = self.fetch(name)?;
        parse_macro_csv(&bytes, name, map)
    }
}

fn price_map(cfg: &RunConfig) -> ColumnMap {
    ColumnMap {
        date: cfg.date_column.clone(),
        value: cfg.close_column.clone(),
    }
}

/// Runs one case end to end. The same config always yields the same bundle.
pub fn run_case(cfg: &RunConfig) -> Result<ReportBundle, HarnessError> {
    cfg.validate()?;
    let mut inputs = Inputs::new(cfg);
    let reports = match cfg.case {
        CaseKind::Portfolio => vec![portfolio_report(cfg, &mut inputs)?],
        CaseKind::Price => vec![price_report(cfg)?],
        CaseKind::Risk => risk_reports(cfg, &mut inputs)?,
        CaseKind::QmlA | CaseKind::QmlB => vec![qml_report(cfg, &mut inputs)?],
    };
    let mut bundle = ReportBundle::empty(cfg);
    bundle.manifest.inputs = inputs.read;
    for r in &reports {
        bundle.manifest.outputs.push(InputDigest {
            file: r.file_name.clone(),
            sha256: sha256_hex(r.to_csv()?.as_bytes()),
        });
    }
    bundle.reports = reports;
    Ok(bundle)
}

/// Writes every table plus `manifest.json`; returns the paths written.
pub fn write_report(bundle: &ReportBundle, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let io = |p: &Path, e: std::io::Error| HarnessError::Io(format!("{}: {e}", p.display()));
    std::fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
    let mut written = Vec::new();
    for r in &bundle.reports {
        let path = out_dir.join(&r.file_name);
        std::fs::write(&path, r.to_csv()?).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    let path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&bundle.manifest).map_err(|e| HarnessError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| io(&path, e))?;
    written.push(path);
    Ok(written)
}

fn portfolio_report(cfg: &RunConfig, inputs: &mut Inputs) -> Result<Report, HarnessError> {
    let map = price_map(cfg);
    let series = cfg
        .tickers
        .iter()
        .map(|t| inputs.prices(t, &map))
        .collect::<Result<Vec<_>, _>>()?;
    let (_, closes) = align_closes(&series)?;
    let universe = estimate_annualized_moments(&cfg.tickers, &closes, cfg.trading_days)?;
    let records = enumerate_feasible(&universe, cfg.risk_aversion, cfg.penalty, cfg.cardinality)?;
    let qubo = build_cardinality_qubo(&universe, cfg.risk_aversion, cfg.penalty, cfg.cardinality)?;

    let mut rep = Report::new("portfolio.csv", &PORTFOLIO_HEADER);
    for (i, r) in records.iter().enumerate() {
        rep.rows.push(vec![
            (i + 1).to_string(),
            r.label(&universe.tickers),
            fmt_g6(r.penalised_objective),
            fmt_g6(r.expected_return),
            fmt_g6(r.volatility),
            "classical-exact".into(),
        ]);
    }

    let rng = RandomStream::new(cfg.seed, 0);
    let diag = cost_diagonal(&qubo)?;
    let result = optimize_qaoa(
        &diag,
        cfg.qaoa_depth,
        cfg.qaoa_restarts,
        &rng.substream(0),
        &SimplexConfig::default(),
    )?;
    let state = qaoa_state(&result.best_params, &diag)?;
    let ranked = sample_and_rank(&state, cfg.qaoa_shots, &qubo, cfg.cardinality, &mut rng.substream(1))?;
    let (pick, feasible) =
        best_feasible(&ranked).ok_or_else(|| HarnessError::Numerical("QAOA produced no samples".into()))?;
    let record = crate::portfolio::PortfolioRecord::evaluate(&universe, pick.selection.clone(), pick.objective);
    let rank = records
        .iter()
        .position(|r| r.selection == pick.selection)
        .filter(|_| feasible)
        .map_or("NA".to_string(), |i| (i + 1).to_string());
    rep.rows.push(vec![
        rank,
        record.label(&universe.tickers),
        fmt_g6(record.penalised_objective),
        fmt_g6(record.expected_return),
        fmt_g6(record.volatility),
        if feasible { "qaoa" } else { "qaoa-infeasible" }.into(),
    ]);
    Ok(rep)
}

fn price_report(cfg: &RunConfig) -> Result<Report, HarnessError> {
    let spec = GbmSpec {
        s0: cfg.s0,
        rate: cfg.rate,
        sigma: cfg.sigma,
        maturity: cfg.maturity,
        monitoring_dates: cfg.monitoring_dates,
        strike: cfg.strike,
    };
    spec.validate()?;
    let rng = RandomStream::new(cfg.seed, 0);
    let averages = simulate_path_averages(&spec, cfg.presample_paths, &rng.substream(1))?;
    let hist = PayoffHistogram::build(&averages, &spec, cfg.bin_exponent)?;
    let mc = mc_price_asian(&spec, cfg.mc_paths, &rng.substream(0))?;
    let (exact, exact_est) = exact_amplitude_price(&hist, &spec)?;
    let (shot, shot_est) = shot_amplitude_price(&hist, &spec, cfg.shots, &mut rng.substream(2))?;
    let ml = mlqae_estimate(&hist, &cfg.schedule, cfg.shots_per_level, &rng.substream(3))?;
    let ml_price = price_from_amplitude(ml.a_hat, hist.bound, spec.rate, spec.maturity)?;

    let scale = spec.discount() * hist.bound;
    let binomial_se = scale * (shot_est.a_hat * (1.0 - shot_est.a_hat) / cfg.shots as f64).sqrt();
    // Fisher information of the schedule at the fitted angle
    let fisher: f64 = cfg
        .schedule
        .iter()
        .map(|&k| (2.0 * k as f64 + 1.0).powi(2) * 4.0 * cfg.shots_per_level as f64)
        .sum();
    let theta_se = fisher.recip().sqrt();
    let a_se = (2.0 * ml.theta_hat).sin().abs() * theta_se;

    let mut rep = Report::new("price.csv", &PRICE_HEADER);
    rep.rows.push(vec![
        "monte-carlo".into(),
        fmt_g6(mc.price),
        "nan".into(),
        mc.n_paths.to_string(),
        fmt_g6(mc.std_error),
    ]);
    rep.rows.push(vec![
        "exact-amplitude".into(),
        fmt_g6(exact),
        fmt_g6(exact_est.a_hat),
        exact_est.total_oracle_calls.to_string(),
        fmt_g6(0.0),
    ]);
    rep.rows.push(vec![
        "shot-amplitude".into(),
        fmt_g6(shot),
        fmt_g6(shot_est.a_hat),
        shot_est.total_oracle_calls.to_string(),
        fmt_g6(binomial_se),
    ]);
    rep.rows.push(vec![
        "mlqae".into(),
        fmt_g6(ml_price),
        fmt_g6(ml.a_hat),
        ml.total_oracle_calls.to_string(),
        fmt_g6(scale * a_se),
    ]);
    Ok(rep)
}

fn risk_row(method: &str, alpha: f64, var: f64, cvar: f64) -> Vec<String> {
    vec![method.into(), fmt_g6(alpha), fmt_g6(var), fmt_g6(cvar)]
}

fn sample_rows(rep: &mut Report, prefix: &str, s: &LossSample, cfg: &RunConfig) -> Result<(), HarnessError> {
    let h = historical_var_cvar(s, cfg.alpha)?;
    rep.rows
        .push(risk_row(&format!("{prefix}historical"), cfg.alpha, h.var, h.cvar));
    let p = parametric_normal_var_cvar(mean(&s.losses), sample_std(&s.losses), cfg.alpha)?;
    rep.rows
        .push(risk_row(&format!("{prefix}parametric"), cfg.alpha, p.var, p.cvar));
    let g = build_loss_grid(s, cfg.bins)?;
    let gr = grid_risk_measures(&g, cfg.alpha)?;
    let cvar = cvar_from_tail_amplitudes(&g, gr.var)?;
    rep.rows
        .push(risk_row(&format!("{prefix}grid-amplitude"), cfg.alpha, gr.var, cvar));
    Ok(())
}

fn risk_reports(cfg: &RunConfig, inputs: &mut Inputs) -> Result<Vec<Report>, HarnessError> {
    let map = price_map(cfg);
    let series = cfg
        .risk_tickers
        .iter()
        .map(|t| inputs.prices(t, &map))
        .collect::<Result<Vec<_>, _>>()?;
    let (_, closes) = align_closes(&series)?;
    let d = closes.len();
    let t = closes[0].len();
    if t < cfg.stress_factors + 3 {
        return Err(HarnessError::Data(format!(
            "{t} common dates is too few for the stress fit"
        )));
    }

    let mut rep = Report::new("risk.csv", &RISK_HEADER);
    let single = compute_losses(&closes[0], cfg.risk_tickers[0].clone())?;
    sample_rows(&mut rep, "", &single, cfg)?;

    let returns = DMatrix::from_fn(t - 1, d, |r, c| (closes[c][r + 1] / closes[c][r]).ln());
    let w = vec![1.0 / d as f64; d];
    let port = portfolio_losses(&returns, &w)?;
    sample_rows(&mut rep, "portfolio-", &port, cfg)?;

    let (mu, cov) = sample_covariance(&returns);
    let model = pca_loading(&DVector::from_vec(mu), &cov)?;
    let rng = RandomStream::new(cfg.seed, 0);
    let sims = simulate_correlated_returns(&model, cfg.scenario_draws, &rng.substream(0));
    let scen = portfolio_losses(&sims, &w)?;
    let g = build_loss_grid(&scen, cfg.bins)?;
    let gr = grid_risk_measures(&g, cfg.alpha)?;
    let cvar = cvar_from_tail_amplitudes(&g, gr.var)?;
    rep.rows.push(risk_row("pca-scenario-grid", cfg.alpha, gr.var, cvar));

    let factors = principal_factors(&returns, cfg.stress_factors)?;
    let sys = fit_var1(&factors)?;
    let last = factors.nrows() - 1;
    let f0 = DVector::from_iterator(cfg.stress_factors, factors.row(last).iter().copied());
    let sd0 = sample_std(&factors.column(0).iter().copied().collect::<Vec<_>>());
    let mut shock = DVector::zeros(cfg.stress_factors);
    shock[0] = cfg.stress_shock_sd * sd0;
    let shocked = &f0 + &shock;
    let classical = stress_propagate_classical(&sys, &f0, &shock, cfg.stress_horizon)?;
    let quantum = stress_propagate_quantum_inspired(&sys, &shocked, cfg.stress_tau)?;
    let mut stress = Report::new("stress.csv", &STRESS_HEADER);
    for j in 0..cfg.stress_factors {
        stress.rows.push(vec![
            format!("pc{}", j + 1),
            fmt_g6(f0[j]),
            fmt_g6(shocked[j]),
            fmt_g6(classical[j]),
            fmt_g6(quantum[j]),
        ]);
    }
    Ok(vec![rep, stress])
}

fn qml_report(cfg: &RunConfig, inputs: &mut Inputs) -> Result<Report, HarnessError> {
    let market = inputs.prices(&cfg.qml_ticker, &price_map(cfg))?;
    let (train, test, file) = if cfg.case == CaseKind::QmlA {
        let ds = case_a_dataset(&market.date_strings(), &market.closes)?;
        let (train, test) = chronological_split(&ds, cfg.train_fraction)?;
        (train, test, "qml_a.csv")
    } else {
        let map = ColumnMap {
            date: cfg.date_column.clone(),
            value: cfg.macro_value_column.clone(),
        };
        let macros = cfg
            .macro_series
            .iter()
            .map(|m| inputs.macro_series(m, &map))
            .collect::<Result<Vec<_>, _>>()?;
        let table = forward_fill_align(&market, &macros)?;
        let dates: Vec<String> = table.dates.iter().map(|d| d.format("%Y-%m-%d").to_string()).collect();
        let (train, test, _) = case_b_dataset(&dates, &table.closes, &table.columns, cfg.train_fraction)?;
        (train, test, "qml_b.csv")
    };
    let width = train.features.ncols();
    let case_cfg = CaseConfig {
        feature_map: FeatureMapSpec {
            n_qubits: cfg.n_qubits.unwrap_or(width.max(6)).min(MAX_FEATURE_QUBITS),
            encoding_layers: cfg.encoding_layers,
        },
        qsvc_train_cap: cfg.qsvc_train_cap,
        svm_c: cfg.svm_c,
        qnn: QnnConfig {
            layers: cfg.qnn_layers,
            epochs: cfg.epochs,
            learning_rate: cfg.learning_rate,
        },
        threshold: cfg.threshold,
    };
    let mut rng = RandomStream::new(cfg.seed, 0).substream(0);
    let rows = evaluate_case(&train, &test, &case_cfg, &mut rng)?;
    let mut rep = Report::new(file, &QML_HEADER);
    for r in rows {
        rep.rows.push(vec![
            r.family.into(),
            r.model.into(),
            fmt_opt(r.metrics.auc),
            fmt_g6(r.metrics.accuracy),
            fmt_g6(r.metrics.balanced_accuracy),
            fmt_g6(r.metrics.f1),
        ]);
    }
    Ok(rep)
}
