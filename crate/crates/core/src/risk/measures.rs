use crate::numerics::{std_normal_pdf, std_normal_quantile};
use crate::statevector::{attach_payoff_ancilla, grover_power, PreparationOracle};

use super::RiskError;

/// Daily losses (fractions), positive for a fall in value.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSample {
    pub losses: Vec<f64>,
    pub origin: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMethod {
    Historical,
    Parametric,
    Grid,
}

impl RiskMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RiskMethod::Historical => "historical",
            RiskMethod::Parametric => "parametric",
            RiskMethod::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub var: f64,
    pub cvar: f64,
    pub alpha: f64,
    pub method: RiskMethod,
}

fn check_alpha(alpha: f64) -> Result<(), RiskError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(RiskError::InvalidAlpha(alpha))
    }
}

/// `L_t = -ln(P_t / P_{t-1})`.
pub fn compute_losses(prices: &[f64], origin: impl Into<String>) -> Result<LossSample, RiskError> {
    if prices.len() < 2 {
        return Err(RiskError::TooFewPrices(prices.len()));
    }
    if let Some((index, &price)) = prices.iter().enumerate().find(|(_, p)| !(**p > 0.0)) {
        return Err(RiskError::NonPositivePrice { index, price });
    }
    Ok(LossSample {
        losses: prices.windows(2).map(|w| -(w[1] / w[0]).ln()).collect(),
        origin: origin.into(),
    })
}

/// `ceil(alpha n)` as a 1-based rank, robust to `alpha n` landing a hair
/// above an integer through representation error.
fn quantile_rank(alpha: f64, n: usize) -> usize {
    let x = alpha * n as f64;
    let r = x.round();
    let rank = if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.ceil()
    };
    (rank as usize).clamp(1, n)
}

/// VaR is the order statistic of rank `ceil(alpha n)`; CVaR is the mean of
/// all losses at or above it.
pub fn historical_var_cvar(s: &LossSample, alpha: f64) -> Result<RiskReport, RiskError> {
    check_alpha(alpha)?;
    if s.losses.is_empty() {
        return Err(RiskError::EmptySample);
    }
    let mut sorted = s.losses.clone();
    sorted.sort_by(f64::total_cmp);
    let var = sorted[quantile_rank(alpha, sorted.len()) - 1];
    let tail: Vec<f64> = sorted.iter().copied().filter(|&l| l >= var).collect();
    let cvar = tail.iter().sum::<f64>() / tail.len() as f64;
    Ok(RiskReport {
        var,
        cvar,
        alpha,
        method: RiskMethod::Historical,
    })
}

/// Normal losses `N(mu, sigma^2)`: `VaR = mu + sigma z_alpha`,
/// `CVaR = mu + sigma phi(z_alpha) / (1 - alpha)`.
pub fn parametric_normal_var_cvar(mu: f64, sigma: f64, alpha: f64) -> Result<RiskReport, RiskError> {
    check_alpha(alpha)?;
    if !(sigma >= 0.0) {
        return Err(RiskError::InvalidSigma(sigma));
    }
    let z = std_normal_quantile(alpha)?;
    Ok(RiskReport {
        var: mu + sigma * z,
        cvar: mu + sigma * std_normal_pdf(z) / (1.0 - alpha),
        alpha,
        method: RiskMethod::Parametric,
    })
}

/// Discretised loss distribution over equal-width bins.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGrid {
    /// Strictly increasing bin midpoints.
    pub centers: Vec<f64>,
    pub probs: Vec<f64>,
    pub bin_width: f64,
}

impl LossGrid {
    pub fn n_bins(&self) -> usize {
        self.centers.len()
    }
}

/// `n_bins` equal-width bins over `[min, max]` of the sample; a sample with
/// one distinct value collapses to a single bin of zero width.
pub fn build_loss_grid(s: &LossSample, n_bins: usize) -> Result<LossGrid, RiskError> {
    if n_bins == 0 {
        return Err(RiskError::ZeroBins);
    }
    if s.losses.is_empty() {
        return Err(RiskError::EmptySample);
    }
    let lo = s.losses.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Ok(LossGrid {
            centers: vec![lo],
            probs: vec![1.0],
            bin_width: 0.0,
        });
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    for &x in &s.losses {
        counts[crate::pricing::bin_index(x, lo, width, n_bins)] += 1;
    }
    let total = s.losses.len() as f64;
    Ok(LossGrid {
        centers: (0..n_bins).map(|j| lo + (j as f64 + 0.5) * width).collect(),
        probs: counts.iter().map(|&c| c as f64 / total).collect(),
        bin_width: width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `P(L <= x)` over bin centers.
    Cdf,
    /// `P(L >= x)` over bin centers.
    Tail,
}

pub fn grid_probability(g: &LossGrid, x: f64, side: Side) -> f64 {
    let p: f64 = g
        .centers
        .iter()
        .zip(&g.probs)
        .filter(|(c, _)| match side {
            Side::Cdf => **c <= x,
            Side::Tail => **c >= x,
        })
        .map(|(_, p)| p)
        .sum();
    p.clamp(0.0, 1.0)
}

const CDF_SLACK: f64 = 1e-12;

/// Binary search for the smallest bin whose CDF reaches `alpha`, using
/// `O(log N)` CDF-oracle queries. Returns `(bin index, oracle calls)`.
/// CDF values within 1e-12 of `alpha` count as reaching it.
pub fn grid_var_search(g: &LossGrid, alpha: f64) -> Result<(usize, usize), RiskError> {
    check_alpha(alpha)?;
    if g.centers.is_empty() {
        return Err(RiskError::ZeroBins);
    }
    let (mut lo, mut hi) = (0usize, g.n_bins() - 1);
    let mut calls = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        calls += 1;
        if grid_probability(g, g.centers[mid], Side::Cdf) >= alpha - CDF_SLACK {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((lo, calls))
}

/// VaR from [`grid_var_search`]; CVaR as the probability-weighted mean of
/// centers at or above VaR.
pub fn grid_risk_measures(g: &LossGrid, alpha: f64) -> Result<RiskReport, RiskError> {
    let (idx, _) = grid_var_search(g, alpha)?;
    let var = g.centers[idx];
    let (num, den) = g
        .centers
        .iter()
        .zip(&g.probs)
        .filter(|(c, _)| **c >= var)
        .fold((0.0, 0.0), |(n, d), (c, p)| (n + c * p, d + p));
    if den <= 0.0 {
        return Err(RiskError::ZeroTailMass(var));
    }
    Ok(RiskReport {
        var,
        cvar: num / den,
        alpha,
        method: RiskMethod::Grid,
    })
}

fn padded_oracle(probs: &[f64], payoffs: Vec<f64>) -> Result<PreparationOracle, RiskError> {
    let n = probs.len().next_power_of_two();
    let mut p = probs.to_vec();
    let mut f = payoffs;
    p.resize(n, 0.0);
    f.resize(n, 0.0);
    Ok(PreparationOracle::new(&p, &f)?)
}

/// `CVaR = B a_g / P(L >= l)` with both amplitudes read from the simulator:
/// `a_g` encodes `g(l) = l 1{l >= threshold}` scaled by `B`, the tail mass
/// encodes the indicator. Negative tail losses use the symmetric encoding
/// `f = (g / B + 1) / 2`, from which `E[g] = B (2a - 1)`.
pub fn cvar_from_tail_amplitudes(g: &LossGrid, var_level: f64) -> Result<f64, RiskError> {
    let in_tail: Vec<bool> = g.centers.iter().map(|&c| c >= var_level).collect();
    let indicator: Vec<f64> = in_tail.iter().map(|&t| if t { 1.0 } else { 0.0 }).collect();
    let tail_mass = attach_payoff_ancilla(&padded_oracle(&g.probs, indicator)?).ancilla_one_probability()?;
    if tail_mass <= 0.0 {
        return Err(RiskError::ZeroTailMass(var_level));
    }
    let tail_values = g.centers.iter().zip(&in_tail).filter(|(_, t)| **t).map(|(c, _)| *c);
    let bound = tail_values.clone().map(f64::abs).fold(0.0_f64, f64::max);
    if bound == 0.0 {
        return Ok(0.0);
    }
    let signed = tail_values.clone().any(|c| c < 0.0);
    let payoffs: Vec<f64> = g
        .centers
        .iter()
        .zip(&in_tail)
        .map(|(&c, &t)| {
            let gv = if t { c / bound } else { 0.0 };
            if signed {
                0.5 * (gv + 1.0)
            } else {
                gv
            }
        })
        .collect();
    let mut oracle_probs = g.probs.clone();
    if signed {
        // padding bins must carry the neutral payoff 1/2 as well
        let n = oracle_probs.len().next_power_of_two();
        oracle_probs.resize(n, 0.0);
    }
    let mut f = payoffs;
    if signed {
        f.resize(oracle_probs.len(), 0.5);
    }
    let a_g = attach_payoff_ancilla(&padded_oracle(&oracle_probs, f)?).ancilla_one_probability()?;
    let tail_expectation = if signed { bound * (2.0 * a_g - 1.0) } else { bound * a_g };
    Ok(tail_expectation / tail_mass)
}

/// `sin^2((2m + 1) theta)` with `sin^2 theta = p_tail`.
pub fn grover_tail_boost(p_tail: f64, m: usize) -> Result<f64, RiskError> {
    if !(0.0..=1.0).contains(&p_tail) {
        return Err(RiskError::InvalidProbability(p_tail));
    }
    let theta = p_tail.sqrt().asin();
    Ok(((2 * m + 1) as f64 * theta).sin().powi(2))
}

/// Tail probability `P(L >= threshold)` after `m` Grover iterates on the
/// grid register, from the simulator.
pub fn grover_tail_boost_simulated(g: &LossGrid, threshold: f64, m: usize) -> Result<f64, RiskError> {
    let indicator = g
        .centers
        .iter()
        .map(|&c| if c >= threshold { 1.0 } else { 0.0 })
        .collect();
    Ok(grover_power(&padded_oracle(&g.probs, indicator)?, m).ancilla_one_probability()?)
}
