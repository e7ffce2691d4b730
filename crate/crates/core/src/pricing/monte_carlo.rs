use rayon::prelude::*;

use super::PricingError;
use crate::numerics::{mean, sample_std, RandomStream};

const PATHS_PER_BLOCK: usize = 4096;

/// Risk-neutral GBM with an arithmetic-average call on equally spaced
/// monitoring dates `t_i = i T / m`, `i = 1..m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmSpec {
    pub s0: f64,
    /// Continuously compounded rate per year.
    pub rate: f64,
    /// Volatility per sqrt(year).
    pub sigma: f64,
    /// Years.
    pub maturity: f64,
    pub monitoring_dates: usize,
    pub strike: f64,
}

impl GbmSpec {
    pub fn validate(&self) -> Result<(), PricingError> {
        if !(self.s0 > 0.0) || !self.s0.is_finite() {
            return Err(PricingError::InvalidSpec("s0 must be positive"));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(PricingError::InvalidSpec("sigma must be non-negative"));
        }
        if !(self.maturity > 0.0) || !self.maturity.is_finite() {
            return Err(PricingError::InvalidSpec("maturity must be positive"));
        }
        if self.monitoring_dates == 0 {
            return Err(PricingError::InvalidSpec("need at least one monitoring date"));
        }
        if !self.rate.is_finite() || !self.strike.is_finite() {
            return Err(PricingError::InvalidSpec("rate and strike must be finite"));
        }
        Ok(())
    }

    pub fn discount(&self) -> f64 {
        (-self.rate * self.maturity).exp()
    }

    pub fn payoff(&self, average: f64) -> f64 {
        (average - self.strike).max(0.0)
    }

    /// `E[S_bar] = (S0 / m) sum_i exp(r t_i)`.
    pub fn expected_average(&self) -> f64 {
        let m = self.monitoring_dates;
        let dt = self.maturity / m as f64;
        self.s0 * (1..=m).map(|i| (self.rate * dt * i as f64).exp()).sum::<f64>() / m as f64
    }
}

fn path_average(spec: &GbmSpec, rng: &mut RandomStream) -> f64 {
    let m = spec.monitoring_dates;
    let dt = spec.maturity / m as f64;
    let drift = (spec.rate - 0.5 * spec.sigma * spec.sigma) * dt;
    let vol = spec.sigma * dt.sqrt();
    let mut log_s = 0.0;
    let mut acc = 0.0;
    for _ in 0..m {
        let z = if vol > 0.0 { rng.normal() } else { 0.0 };
        log_s += drift + vol * z;
        acc += log_s.exp();
    }
    spec.s0 * acc / m as f64
}

/// Arithmetic averages of `n_paths` exact log-normal paths. Paths are
/// generated in fixed-size blocks, block `b` drawing from
/// `rng.substream(b)`, so the output does not depend on thread count.
pub fn simulate_path_averages(spec: &GbmSpec, n_paths: usize, rng: &RandomStream) -> Result<Vec<f64>, PricingError> {
    spec.validate()?;
    let blocks = n_paths.div_ceil(PATHS_PER_BLOCK);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut s = rng.substream(b as u64);
            let len = PATHS_PER_BLOCK.min(n_paths - b * PATHS_PER_BLOCK);
            (0..len).map(|_| path_average(spec, &mut s)).collect()
        })
        .collect();
    Ok(chunks.concat())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

/// Discounted mean payoff of precomputed path averages.
pub fn mc_price_from_averages(spec: &GbmSpec, averages: &[f64]) -> Result<McEstimate, PricingError> {
    if averages.len() < 2 {
        return Err(PricingError::TooFewPaths(averages.len()));
    }
    let payoffs: Vec<f64> = averages.iter().map(|&a| spec.payoff(a)).collect();
    let d = spec.discount();
    Ok(McEstimate {
        price: d * mean(&payoffs),
        std_error: d * sample_std(&payoffs) / (payoffs.len() as f64).sqrt(),
        n_paths: payoffs.len(),
    })
}

/// `V0 ~ exp(-rT) (1/N) sum max(S_bar - K, 0)` with its standard error.
pub fn mc_price_asian(spec: &GbmSpec, n_paths: usize, rng: &RandomStream) -> Result<McEstimate, PricingError> {
    if n_paths < 2 {
        return Err(PricingError::TooFewPaths(n_paths));
    }
    let averages = simulate_path_averages(spec, n_paths, rng)?;
    mc_price_from_averages(spec, &averages)
}
