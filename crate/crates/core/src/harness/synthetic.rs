//! Seeded stand-in market: six correlated GBM equities, a regime-switching
//! index and three monthly macro series over 2024-01-02..2025-12-31.

use chrono::{Datelike, NaiveDate, Weekday};
use nalgebra::{DMatrix, DVector};

use crate::numerics::RandomStream;

pub const SYNTHETIC_SEED: u64 = 20_240_102;
pub const ASSETS: [&str; 6] = ["SYN1", "SYN2", "SYN3", "SYN4", "SYN5", "SYN6"];
pub const INDEX: &str = "SYNIDX";
pub const MACROS: [&str; 3] = ["RATE", "CPI", "PROD"];

const DRIFT: [f64; 6] = [0.22, 0.35, 0.12, 0.18, 0.08, 0.28];
const VOL: [f64; 6] = [0.25, 0.45, 0.22, 0.20, 0.24, 0.30];
/// One-factor loadings; off-diagonal correlation is `b_i b_j`.
const BETA: [f64; 6] = [0.60, 0.70, 0.50, 0.55, 0.45, 0.65];
const START_PRICE: [f64; 6] = [185.0, 140.0, 290.0, 620.0, 48.0, 140.0];
const DT: f64 = 1.0 / 252.0;

pub fn business_days() -> Vec<NaiveDate> {
    let start = NaiveDate::from_ymd_opt(2024, 1, 2).expect("valid date");
    let end = NaiveDate::from_ymd_opt(2025, 12, 31).expect("valid date");
    start
        .iter_days()
        .take_while(|d| *d <= end)
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .collect()
}

fn month_starts() -> Vec<NaiveDate> {
    (0..24)
        .map(|m| NaiveDate::from_ymd_opt(2024 + m / 12, (m % 12 + 1) as u32, 1).expect("valid date"))
        .collect()
}

pub fn correlation() -> DMatrix<f64> {
    DMatrix::from_fn(6, 6, |i, j| if i == j { 1.0 } else { BETA[i] * BETA[j] })
}

fn price_csv(dates: &[NaiveDate], closes: &[f64]) -> String {
    let mut s = String::from("date,close\n");
    for (d, c) in dates.iter().zip(closes) {
        s.push_str(&format!("{},{c:.4}\n", d.format("%Y-%m-%d")));
    }
    s
}

fn macro_csv(dates: &[NaiveDate], values: &[f64]) -> String {
    let mut s = String::from("date,value\n");
    for (d, v) in dates.iter().zip(values) {
        s.push_str(&format!("{},{v:.3}\n", d.format("%Y-%m-%d")));
    }
    s
}

/// `(file name, CSV text)` for every bundled input, in a fixed order.
pub fn synthetic_files() -> Vec<(String, String)> {
    let root = RandomStream::new(SYNTHETIC_SEED, 0);
    let dates = business_days();
    let n = dates.len();
    let mut out = Vec::new();

    let chol = correlation()
        .cholesky()
        .expect("one-factor correlation is positive definite");
    let l = chol.l();
    let mut rng = root.substream(0);
    let mut paths: Vec<Vec<f64>> = START_PRICE.iter().map(|&p| vec![p]).collect();
    for _ in 1..n {
        let z = &l * DVector::from_vec(rng.normals(6));
        for a in 0..6 {
            let last = *paths[a].last().expect("seeded");
            let step = (DRIFT[a] - 0.5 * VOL[a] * VOL[a]) * DT + VOL[a] * DT.sqrt() * z[a];
            paths[a].push(last * step.exp());
        }
    }
    for (name, closes) in ASSETS.iter().zip(&paths) {
        out.push((format!("{name}.csv"), price_csv(&dates, closes)));
    }

    // calm index with two turbulent stretches
    let mut rng = root.substream(1);
    let mut idx = vec![470.0];
    for t in 1..n {
        let vol = if (100..160).contains(&t) || (330..390).contains(&t) {
            0.32
        } else {
            0.12
        };
        let step = (0.08 - 0.5 * vol * vol) * DT + vol * DT.sqrt() * rng.normal();
        idx.push(idx[t - 1] * step.exp());
    }
    out.push((format!("{INDEX}.csv"), price_csv(&dates, &idx)));

    let months = month_starts();
    let mut rng = root.substream(2);
    let mut rate: Vec<f64> = vec![5.33];
    let mut cpi = vec![308.4];
    let mut prod = vec![102.6];
    for m in 1..months.len() {
        let cut = if m >= 8 && rng.uniform() < 0.4 { 0.25 } else { 0.0 };
        rate.push((rate[m - 1] - cut).max(0.0));
        cpi.push(cpi[m - 1] * (1.0 + 0.0025 + 0.001 * rng.normal()));
        prod.push(prod[m - 1] + 0.3 * rng.normal());
    }
    for (name, values) in MACROS.iter().zip([&rate, &cpi, &prod]) {
        out.push((format!("{name}.csv"), macro_csv(&months, values)));
    }
    out
}
