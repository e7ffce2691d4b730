use nalgebra::{DMatrix, DVector};

use super::{bits_from_index, build_cardinality_qubo, qubo_energy, PortfolioError, ENUMERATION_CAP, MAX_ASSETS};
use crate::numerics::sample_covariance;

/// Annualised expected returns and covariance for a set of assets.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetUniverse {
    pub tickers: Vec<String>,
    /// Expected return per year (fraction).
    pub mu: DVector<f64>,
    /// Covariance per year squared.
    pub sigma: DMatrix<f64>,
}

impl AssetUniverse {
    pub fn new(tickers: Vec<String>, mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self, PortfolioError> {
        let n = tickers.len();
        if n > MAX_ASSETS {
            return Err(PortfolioError::TooManyAssets(n));
        }
        if mu.len() != n {
            return Err(PortfolioError::DimensionMismatch {
                expected: n,
                got: mu.len(),
            });
        }
        if sigma.shape() != (n, n) {
            return Err(PortfolioError::DimensionMismatch {
                expected: n,
                got: sigma.nrows(),
            });
        }
        let asym = if n == 0 {
            0.0
        } else {
            (&sigma - sigma.transpose()).amax()
        };
        if asym > 1e-10 {
            return Err(PortfolioError::NotSymmetric(asym));
        }
        Ok(Self { tickers, mu, sigma })
    }

    pub fn n_assets(&self) -> usize {
        self.tickers.len()
    }
}

/// Moments of daily log-returns scaled by `trading_days`: `mu = d * mean`
/// and `Sigma = d * sample covariance` (denominator `T - 1`).
///
/// `closes[i]` is the aligned close series of `tickers[i]`.
pub fn estimate_annualized_moments(
    tickers: &[String],
    closes: &[Vec<f64>],
    trading_days: u32,
) -> Result<AssetUniverse, PortfolioError> {
    if closes.len() != tickers.len() {
        return Err(PortfolioError::DimensionMismatch {
            expected: tickers.len(),
            got: closes.len(),
        });
    }
    let n = tickers.len();
    let t = closes.first().map_or(0, Vec::len);
    if t < 2 {
        return Err(PortfolioError::TooFewObservations(t));
    }
    for (asset, series) in closes.iter().enumerate() {
        if series.len() != t {
            return Err(PortfolioError::Misaligned {
                asset,
                expected: t,
                got: series.len(),
            });
        }
        if let Some(&price) = series.iter().find(|p| !(**p > 0.0)) {
            return Err(PortfolioError::NonPositivePrice { asset, price });
        }
    }
    let returns = DMatrix::from_fn(t - 1, n, |r, c| (closes[c][r + 1] / closes[c][r]).ln());
    let (means, cov) = sample_covariance(&returns);
    let d = f64::from(trading_days);
    AssetUniverse::new(
        tickers.to_vec(),
        DVector::from_iterator(n, means.into_iter().map(|m| d * m)),
        cov * d,
    )
}

/// One portfolio from the exact search.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioRecord {
    pub selection: Vec<bool>,
    pub cardinality: usize,
    /// Equal-weight return `mu'x / K`, per year.
    pub expected_return: f64,
    /// Equal-weight volatility `sqrt(w' Sigma w)` with `w = x / K`, per year.
    pub volatility: f64,
    /// `z'Qz + offset` of the cardinality QUBO (penalty included).
    pub penalised_objective: f64,
}

impl PortfolioRecord {
    pub fn evaluate(universe: &AssetUniverse, selection: Vec<bool>, objective: f64) -> Self {
        let n = universe.n_assets();
        let cardinality = selection.iter().filter(|&&b| b).count();
        let w = if cardinality == 0 {
            0.0
        } else {
            1.0 / cardinality as f64
        };
        let weights = DVector::from_iterator(n, selection.iter().map(|&b| if b { w } else { 0.0 }));
        let expected_return = universe.mu.dot(&weights);
        let variance = (weights.transpose() * &universe.sigma * &weights)[(0, 0)];
        Self {
            selection,
            cardinality,
            expected_return,
            volatility: variance.max(0.0).sqrt(),
            penalised_objective: objective,
        }
    }

    pub fn label(&self, tickers: &[String]) -> String {
        self.selection
            .iter()
            .zip(tickers)
            .filter(|(b, _)| **b)
            .map(|(_, t)| t.as_str())
            .collect::<Vec<_>>()
            .join("/")
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `C(n, K)` portfolios with exactly `K` assets, ranked by penalised
/// objective ascending; ties go to the lexicographically smallest selection.
pub fn enumerate_feasible(
    universe: &AssetUniverse,
    lambda_risk: f64,
    penalty: f64,
    k: usize,
) -> Result<Vec<PortfolioRecord>, PortfolioError> {
    let qubo = build_cardinality_qubo(universe, lambda_risk, penalty, k)?;
    let n = universe.n_assets();
    let count = binomial(n as u64, k as u64);
    if count > ENUMERATION_CAP {
        return Err(PortfolioError::EnumerationCap(count));
    }
    let mut records = Vec::with_capacity(count as usize);
    for x in 0..(1usize << n) {
        if x.count_ones() as usize != k {
            continue;
        }
        let z = bits_from_index(x, n);
        let objective = qubo_energy(&qubo, &z)?;
        records.push(PortfolioRecord::evaluate(universe, z, objective));
    }
    records.sort_by(|a, b| {
        a.penalised_objective
            .total_cmp(&b.penalised_objective)
            .then_with(|| a.selection.cmp(&b.selection))
    });
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("A{i}")).collect()
    }

    #[test]
    fn constant_prices_have_zero_moments() {
        let u = estimate_annualized_moments(&names(2), &[vec![10.0; 5], vec![3.0; 5]], 252).unwrap();
        assert_eq!(u.mu, DVector::zeros(2));
        assert_eq!(u.sigma, DMatrix::zeros(2, 2));
    }

    #[test]
    fn identical_series_are_perfectly_correlated() {
        let p = vec![100.0, 101.0, 99.5, 102.0, 103.1];
        let u = estimate_annualized_moments(&names(2), &[p.clone(), p], 252).unwrap();
        let corr = u.sigma[(0, 1)] / (u.sigma[(0, 0)] * u.sigma[(1, 1)]).sqrt();
        assert!((corr - 1.0).abs() < 1e-12);
        let e = crate::numerics::symmetric_eigendecompose(&u.sigma).unwrap();
        assert!(e.eigenvalues[1].abs() < 1e-14);
    }

    #[test]
    fn moments_match_direct_summation() {
        let a = [100.0, 102.0, 101.0, 104.0, 103.0, 107.0];
        let b = [50.0, 49.0, 51.0, 50.5, 52.0, 51.0];
        let u = estimate_annualized_moments(&names(2), &[a.to_vec(), b.to_vec()], 252).unwrap();
        let ra: Vec<f64> = a.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        let rb: Vec<f64> = b.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        let t = ra.len() as f64;
        let (ma, mb) = (ra.iter().sum::<f64>() / t, rb.iter().sum::<f64>() / t);
        let mut cab = 0.0;
        let mut caa = 0.0;
        for i in 0..ra.len() {
            cab += (ra[i] - ma) * (rb[i] - mb);
            caa += (ra[i] - ma) * (ra[i] - ma);
        }
        assert!((u.mu[0] - 252.0 * ma).abs() < 1e-12);
        assert!((u.mu[1] - 252.0 * mb).abs() < 1e-12);
        assert!((u.sigma[(0, 1)] - 252.0 * cab / (t - 1.0)).abs() < 1e-12);
        assert!((u.sigma[(0, 0)] - 252.0 * caa / (t - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn moment_errors() {
        assert!(matches!(
            estimate_annualized_moments(&names(1), &[vec![1.0]], 252),
            Err(PortfolioError::TooFewObservations(1))
        ));
        assert!(matches!(
            estimate_annualized_moments(&names(2), &[vec![1.0, 2.0], vec![1.0]], 252),
            Err(PortfolioError::Misaligned { asset: 1, .. })
        ));
        assert!(matches!(
            estimate_annualized_moments(&names(1), &[vec![1.0, 0.0]], 252),
            Err(PortfolioError::NonPositivePrice { .. })
        ));
    }

    #[test]
    fn full_cardinality_has_one_record() {
        let u = AssetUniverse::new(names(4), DVector::from_element(4, 0.1), DMatrix::identity(4, 4) * 0.04).unwrap();
        let recs = enumerate_feasible(&u, 1.0, 1.0, 4).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].selection, vec![true; 4]);
        assert!((recs[0].expected_return - 0.1).abs() < 1e-15);
        assert!((recs[0].volatility - 0.1).abs() < 1e-15);
    }

    #[test]
    fn ties_break_lexicographically() {
        let u = AssetUniverse::new(names(3), DVector::zeros(3), DMatrix::zeros(3, 3)).unwrap();
        let recs = enumerate_feasible(&u, 1.0, 1.0, 1).unwrap();
        let order: Vec<Vec<bool>> = recs.into_iter().map(|r| r.selection).collect();
        assert_eq!(
            order,
            vec![
                vec![false, false, true],
                vec![false, true, false],
                vec![true, false, false]
            ]
        );
    }

    #[test]
    fn label_joins_tickers() {
        let u = AssetUniverse::new(names(3), DVector::zeros(3), DMatrix::zeros(3, 3)).unwrap();
        let r = PortfolioRecord::evaluate(&u, vec![true, false, true], 0.0);
        assert_eq!(r.label(&u.tickers), "A0/A2");
    }
}
