use std::path::Path;

use chrono::NaiveDate;

use super::HarnessError;

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Daily closes, dates strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub ticker: String,
    pub dates: Vec<NaiveDate>,
    pub closes: Vec<f64>,
}

impl PriceSeries {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn date_strings(&self) -> Vec<String> {
        self.dates.iter().map(|d| d.format(DATE_FORMAT).to_string()).collect()
    }
}

/// Sparse dated observations such as a monthly macro release.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroSeries {
    pub name: String,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// Header names to read. Defaults to `date` and `close`/`value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub date: String,
    pub value: String,
}

impl ColumnMap {
    pub fn prices() -> Self {
        ColumnMap {
            date: "date".into(),
            value: "close".into(),
        }
    }

    pub fn macros() -> Self {
        ColumnMap {
            date: "date".into(),
            value: "value".into(),
        }
    }
}

fn parse_date(s: &str, origin: &str, line: usize) -> Result<NaiveDate, HarnessError> {
    NaiveDate::parse_from_str(s.trim(), DATE_FORMAT)
        .map_err(|_| HarnessError::Data(format!("{origin}:{line}: bad date {s:?}")))
}

/// `(date, raw value)` rows from a headed CSV.
fn read_columns(bytes: &[u8], origin: &str, map: &ColumnMap) -> Result<Vec<(NaiveDate, String, usize)>, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(|e| HarnessError::Data(format!("{origin}: {e}")))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| HarnessError::Data(format!("{origin}: missing column {name:?}")))
    };
    let (di, vi) = (find(&map.date)?, find(&map.value)?);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| HarnessError::Data(format!("{origin}:{line}: {e}")))?;
        let (Some(d), Some(v)) = (rec.get(di), rec.get(vi)) else {
            return Err(HarnessError::Data(format!("{origin}:{line}: short row")));
        };
        rows.push((parse_date(d, origin, line)?, v.to_string(), line));
    }
    Ok(rows)
}

fn check_ascending(dates: &[NaiveDate], origin: &str) -> Result<(), HarnessError> {
    if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
        return Err(HarnessError::Data(format!(
            "{origin}: dates not strictly ascending at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

pub fn parse_price_csv(bytes: &[u8], ticker: &str, map: &ColumnMap) -> Result<PriceSeries, HarnessError> {
    let mut dates = Vec::new();
    let mut closes = Vec::new();
    for (date, raw, line) in read_columns(bytes, ticker, map)? {
        let close: f64 = raw
            .parse()
            .map_err(|_| HarnessError::Data(format!("{ticker}:{line}: bad price {raw:?}")))?;
        if !(close > 0.0) || !close.is_finite() {
            return Err(HarnessError::Data(format!(
                "{ticker}:{line}: non-positive price {close}"
            )));
        }
        dates.push(date);
        closes.push(close);
    }
    if dates.is_empty() {
        return Err(HarnessError::Data(format!("{ticker}: no rows")));
    }
    check_ascending(&dates, ticker)?;
    Ok(PriceSeries {
        ticker: ticker.to_string(),
        dates,
        closes,
    })
}

/// Ticker is the file stem up to the first `_`.
pub fn load_price_csv(path: &Path, map: &ColumnMap) -> Result<PriceSeries, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
    parse_price_csv(&bytes, &series_name(path), map)
}

/// FRED-style `.` placeholders are skipped.
pub fn parse_macro_csv(bytes: &[u8], name: &str, map: &ColumnMap) -> Result<MacroSeries, HarnessError> {
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for (date, raw, line) in read_columns(bytes, name, map)? {
        if raw == "." || raw.is_empty() {
            continue;
        }
        let v: f64 = raw
            .parse()
            .map_err(|_| HarnessError::Data(format!("{name}:{line}: bad value {raw:?}")))?;
        dates.push(date);
        values.push(v);
    }
    check_ascending(&dates, name)?;
    Ok(MacroSeries {
        name: name.to_string(),
        dates,
        values,
    })
}

pub fn load_macro_csv(path: &Path, map: &ColumnMap) -> Result<MacroSeries, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
    parse_macro_csv(&bytes, &series_name(path), map)
}

fn series_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    stem.split('_').next().unwrap_or_default().to_string()
}

/// Market dates with every macro value carried forward from its latest
/// release on or before that date.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTable {
    pub dates: Vec<NaiveDate>,
    pub closes: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

/// Leading market dates that precede some series' first release are dropped.
pub fn forward_fill_align(market: &PriceSeries, macros: &[MacroSeries]) -> Result<AlignedTable, HarnessError> {
    let mut cursors = vec![0usize; macros.len()];
    let mut out = AlignedTable {
        dates: vec![],
        closes: vec![],
        columns: macros.iter().map(|m| (m.name.clone(), vec![])).collect(),
    };
    for (&d, &c) in market.dates.iter().zip(&market.closes) {
        let mut current = Vec::with_capacity(macros.len());
        for (m, cur) in macros.iter().zip(cursors.iter_mut()) {
            while *cur < m.dates.len() && m.dates[*cur] <= d {
                *cur += 1;
            }
            current.push(if *cur == 0 { None } else { Some(m.values[*cur - 1]) });
        }
        if current.iter().all(Option::is_some) {
            out.dates.push(d);
            out.closes.push(c);
            for (col, v) in out.columns.iter_mut().zip(current) {
                col.1.push(v.expect("checked"));
            }
        }
    }
    if out.dates.is_empty() {
        return Err(HarnessError::Data(format!(
            "{}: no market date has a value for every macro series",
            market.ticker
        )));
    }
    Ok(out)
}

/// Inner join of several series on their common dates.
pub fn align_closes(series: &[PriceSeries]) -> Result<(Vec<NaiveDate>, Vec<Vec<f64>>), HarnessError> {
    let Some(first) = series.first() else {
        return Err(HarnessError::Config("no tickers given".into()));
    };
    let mut common: Vec<NaiveDate> = first.dates.clone();
    for s in &series[1..] {
        let set: std::collections::BTreeSet<_> = s.dates.iter().collect();
        common.retain(|d| set.contains(d));
    }
    if common.len() < 2 {
        return Err(HarnessError::Data("fewer than two common dates across tickers".into()));
    }
    let closes = series
        .iter()
        .map(|s| {
            let mut j = 0;
            common
                .iter()
                .map(|d| {
                    while s.dates[j] < *d {
                        j += 1;
                    }
                    s.closes[j]
                })
                .collect()
        })
        .collect();
    Ok((common, closes))
}
