use nalgebra::DMatrix;

use crate::numerics::{mean, sample_std, RandomStream};

use super::{
    classification_metrics, gram_matrix_with_cap, kernel_matrix, logistic_train, qnn_forward, qnn_train, svm_predict,
    svm_train, FeatureMapSpec, FeatureScaler, Metrics, QmlError, QnnConfig, MAX_QSVC_TRAIN,
};

pub const CASE_A_FEATURES: [&str; 5] = ["ret", "ret_lag1", "vol20", "mean10", "trend50"];
/// Market columns of the regime case; macro columns follow.
pub const CASE_B_FEATURES: [&str; 4] = ["ret", "vol20", "mean10", "trend50"];

const WARMUP: usize = 49;
const VOL_WINDOW: usize = 20;
const REGIME_QUANTILE: f64 = 0.7;

/// Rows in chronological order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub dates: Vec<String>,
    pub features: DMatrix<f64>,
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn rows(&self, start: usize, end: usize) -> Dataset {
        Dataset {
            dates: self.dates[start..end].to_vec(),
            features: self.features.rows(start, end - start).into_owned(),
            labels: self.labels[start..end].to_vec(),
            feature_names: self.feature_names.clone(),
        }
    }
}

struct MarketColumns {
    ret: Vec<f64>,
    vol20: Vec<f64>,
    mean10: Vec<f64>,
    trend50: Vec<f64>,
}

/// Indicators at each price index `t >= 49`; index 0 of each column is `t = 49`.
fn market_columns(closes: &[f64]) -> Result<MarketColumns, QmlError> {
    if let Some(&p) = closes.iter().find(|p| !(**p > 0.0)) {
        return Err(QmlError::InvalidLabel(p));
    }
    // r[i] is the return into price i
    let mut r = vec![0.0; closes.len()];
    for t in 1..closes.len() {
        r[t] = (closes[t] / closes[t - 1]).ln();
    }
    let mut cols = MarketColumns {
        ret: vec![],
        vol20: vec![],
        mean10: vec![],
        trend50: vec![],
    };
    for t in WARMUP..closes.len() {
        cols.ret.push(r[t]);
        cols.vol20.push(sample_std(&r[t + 1 - VOL_WINDOW..=t]));
        cols.mean10.push(mean(&r[t - 9..=t]));
        cols.trend50.push(closes[t] / mean(&closes[t - WARMUP..=t]) - 1.0);
    }
    Ok(cols)
}

fn check_lengths(dates: &[String], closes: &[f64], needed: usize) -> Result<(), QmlError> {
    if dates.len() != closes.len() {
        return Err(QmlError::LengthMismatch {
            expected: closes.len(),
            got: dates.len(),
        });
    }
    if closes.len() < needed {
        return Err(QmlError::TooFewRows {
            needed,
            got: closes.len(),
        });
    }
    Ok(())
}

/// Next-day direction: features at day `t`, label `P_{t+1} > P_t`.
pub fn case_a_dataset(dates: &[String], closes: &[f64]) -> Result<Dataset, QmlError> {
    check_lengths(dates, closes, WARMUP + 3)?;
    let cols = market_columns(closes)?;
    let n = closes.len() - 1 - WARMUP;
    let features = DMatrix::from_fn(n, 5, |i, j| match j {
        0 => cols.ret[i],
        1 => {
            let t = i + WARMUP;
            (closes[t - 1] / closes[t - 2]).ln()
        }
        2 => cols.vol20[i],
        3 => cols.mean10[i],
        _ => cols.trend50[i],
    });
    Ok(Dataset {
        dates: dates[WARMUP..WARMUP + n].to_vec(),
        features,
        labels: (0..n)
            .map(|i| u8::from(closes[i + WARMUP + 1] > closes[i + WARMUP]))
            .collect(),
        feature_names: CASE_A_FEATURES.iter().map(|s| s.to_string()).collect(),
    })
}

/// Volatility regime: label is 20-day realised volatility above the 70th
/// percentile of its training values. Macro columns must already be aligned
/// to `dates`. Returns `(train, test, threshold)`.
pub fn case_b_dataset(
    dates: &[String],
    closes: &[f64],
    macros: &[(String, Vec<f64>)],
    train_fraction: f64,
) -> Result<(Dataset, Dataset, f64), QmlError> {
    check_lengths(dates, closes, WARMUP + 2)?;
    for (_, col) in macros {
        if col.len() != closes.len() {
            return Err(QmlError::LengthMismatch {
                expected: closes.len(),
                got: col.len(),
            });
        }
    }
    let cols = market_columns(closes)?;
    let n = closes.len() - WARMUP;
    let width = 4 + macros.len();
    let features = DMatrix::from_fn(n, width, |i, j| match j {
        0 => cols.ret[i],
        1 => cols.vol20[i],
        2 => cols.mean10[i],
        3 => cols.trend50[i],
        _ => macros[j - 4].1[i + WARMUP],
    });
    let mut names: Vec<String> = CASE_B_FEATURES.iter().map(|s| s.to_string()).collect();
    names.extend(macros.iter().map(|(name, _)| name.clone()));
    let unlabeled = Dataset {
        dates: dates[WARMUP..].to_vec(),
        features,
        labels: vec![0; n],
        feature_names: names,
    };
    let (mut train, mut test) = chronological_split(&unlabeled, train_fraction)?;
    let mut vols: Vec<f64> = cols.vol20[..train.len()].to_vec();
    vols.sort_by(f64::total_cmp);
    let rank = ((REGIME_QUANTILE * vols.len() as f64).ceil() as usize).clamp(1, vols.len());
    let threshold = vols[rank - 1];
    train.labels = cols.vol20[..train.len()]
        .iter()
        .map(|&v| u8::from(v > threshold))
        .collect();
    test.labels = cols.vol20[train.len()..]
        .iter()
        .map(|&v| u8::from(v > threshold))
        .collect();
    Ok((train, test, threshold))
}

/// First `floor(fraction n)` rows train, the rest test. No shuffling.
pub fn chronological_split(ds: &Dataset, fraction: f64) -> Result<(Dataset, Dataset), QmlError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(QmlError::InvalidConfig("train fraction must lie in (0, 1)"));
    }
    let n_train = (fraction * ds.len() as f64).floor() as usize;
    if n_train == 0 || n_train == ds.len() {
        return Err(QmlError::TooFewRows {
            needed: 2,
            got: ds.len(),
        });
    }
    let (train, test) = (ds.rows(0, n_train), ds.rows(n_train, ds.len()));
    let train_end = train.dates.iter().max().cloned().unwrap_or_default();
    let test_start = test.dates.iter().min().cloned().unwrap_or_default();
    if train_end >= test_start {
        return Err(QmlError::SplitOrder { train_end, test_start });
    }
    Ok((train, test))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub feature_map: FeatureMapSpec,
    pub qsvc_train_cap: usize,
    pub svm_c: f64,
    pub qnn: QnnConfig,
    pub threshold: f64,
}

impl Default for CaseConfig {
    fn default() -> Self {
        CaseConfig {
            feature_map: FeatureMapSpec::default(),
            qsvc_train_cap: MAX_QSVC_TRAIN,
            svm_c: 1.0,
            qnn: QnnConfig::default(),
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRow {
    pub family: &'static str,
    pub model: &'static str,
    pub metrics: Metrics,
}

fn matrix_rows(x: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect()
}

/// Fits the logistic baseline, the kernel SVM (on the most recent
/// `qsvc_train_cap` training rows) and the QNN, then scores the test set.
pub fn evaluate_case(
    train: &Dataset,
    test: &Dataset,
    cfg: &CaseConfig,
    rng: &mut RandomStream,
) -> Result<Vec<ModelRow>, QmlError> {
    if train.is_empty() || test.is_empty() {
        return Err(QmlError::TooFewRows { needed: 1, got: 0 });
    }
    let train_end = train.dates.iter().max().cloned().unwrap_or_default();
    let test_start = test.dates.iter().min().cloned().unwrap_or_default();
    if train_end >= test_start {
        return Err(QmlError::SplitOrder { train_end, test_start });
    }
    let mut out = Vec::with_capacity(3);

    let lr = logistic_train(&train.features, &train.labels)?;
    let p = lr.predict_proba(&test.features)?;
    out.push(ModelRow {
        family: "classical",
        model: "logistic-regression",
        metrics: classification_metrics(&test.labels, &p, cfg.threshold)?,
    });

    let scaler = FeatureScaler::fit(&train.features)?;
    let xs_train = scaler.transform(&train.features)?;
    let xs_test = scaler.transform(&test.features)?;

    let start = train.len().saturating_sub(cfg.qsvc_train_cap);
    let k_rows = xs_train.rows(start, train.len() - start).into_owned();
    let y_svm: Vec<f64> = train.labels[start..]
        .iter()
        .map(|&l| if l == 1 { 1.0 } else { -1.0 })
        .collect();
    let gram = gram_matrix_with_cap(&k_rows, &cfg.feature_map, cfg.qsvc_train_cap)?;
    let svm = svm_train(&gram, &y_svm, cfg.svm_c)?;
    let cross = kernel_matrix(&xs_test, &k_rows, &cfg.feature_map)?;
    let svm_scores = (0..cross.nrows())
        .map(|i| {
            let row: Vec<f64> = cross.row(i).iter().copied().collect();
            svm_predict(&svm, &row).map(|(s, _)| 1.0 / (1.0 + (-s).exp()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.push(ModelRow {
        family: "quantum",
        model: "qsvc",
        metrics: classification_metrics(&test.labels, &svm_scores, cfg.threshold)?,
    });

    let (qnn, _) = qnn_train(&matrix_rows(&xs_train), &train.labels, &cfg.feature_map, &cfg.qnn, rng)?;
    let qnn_scores = matrix_rows(&xs_test)
        .iter()
        .map(|x| qnn_forward(x, &qnn, &cfg.feature_map).map(|(_, p)| p))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(ModelRow {
        family: "quantum",
        model: "qnn",
        metrics: classification_metrics(&test.labels, &qnn_scores, cfg.threshold)?,
    });
    Ok(out)
}
