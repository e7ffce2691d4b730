use super::{GbmSpec, PricingError};
use crate::statevector::PreparationOracle;

/// Discretised distribution of path averages with normalised call payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffHistogram {
    /// Bin midpoints `S_bar_j`.
    pub centers: Vec<f64>,
    pub probs: Vec<f64>,
    /// Payoff bound `B`; zero when every bin is out of the money.
    pub bound: f64,
    /// `f_j = max(S_bar_j - K, 0) / B`, all zero when `B = 0`.
    pub normalized: Vec<f64>,
    pub bin_width: f64,
    pub strike: f64,
}

impl PayoffHistogram {
    /// Equal-width bins over `[min, max]` of the sample, `2^exponent` of them.
    /// A sample with a single distinct value puts all mass in bin 0 with
    /// zero width. `B` defaults to the largest bin payoff.
    pub fn build(averages: &[f64], spec: &GbmSpec, exponent: u32) -> Result<Self, PricingError> {
        if averages.is_empty() {
            return Err(PricingError::EmptySample);
        }
        if exponent > 15 {
            return Err(PricingError::BinExponent(exponent));
        }
        let n_bins = 1usize << exponent;
        let lo = averages.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = averages.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / n_bins as f64;

        let mut counts = vec![0u64; n_bins];
        for &x in averages {
            counts[bin_index(x, lo, width, n_bins)] += 1;
        }
        let total = averages.len() as f64;
        let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
        let centers: Vec<f64> = (0..n_bins).map(|j| lo + (j as f64 + 0.5) * width).collect();
        let bound = centers.iter().map(|&c| spec.payoff(c)).fold(0.0_f64, f64::max);
        let mut h = Self {
            centers,
            probs,
            bound,
            normalized: Vec::new(),
            bin_width: width,
            strike: spec.strike,
        };
        h.normalize();
        Ok(h)
    }

    /// Replaces `B` with a caller-supplied bound no smaller than the default.
    pub fn with_bound(mut self, bound: f64) -> Result<Self, PricingError> {
        let required = self.max_payoff();
        if !(bound >= required) || !bound.is_finite() {
            return Err(PricingError::BoundTooSmall { given: bound, required });
        }
        self.bound = bound;
        self.normalize();
        Ok(self)
    }

    pub fn n_bins(&self) -> usize {
        self.centers.len()
    }

    pub fn max_payoff(&self) -> f64 {
        self.centers
            .iter()
            .map(|&c| (c - self.strike).max(0.0))
            .fold(0.0_f64, f64::max)
    }

    /// Classical value of `a = sum_j p_j f_j`.
    pub fn target_amplitude(&self) -> f64 {
        self.probs.iter().zip(&self.normalized).map(|(p, f)| p * f).sum()
    }

    pub fn oracle(&self) -> Result<PreparationOracle, PricingError> {
        Ok(PreparationOracle::new(&self.probs, &self.normalized)?)
    }

    fn normalize(&mut self) {
        let (strike, bound) = (self.strike, self.bound);
        self.normalized = self
            .centers
            .iter()
            .map(|&c| {
                if bound > 0.0 {
                    ((c - strike).max(0.0) / bound).min(1.0)
                } else {
                    0.0
                }
            })
            .collect();
    }
}

pub(crate) fn bin_index(x: f64, lo: f64, width: f64, n_bins: usize) -> usize {
    if width > 0.0 {
        (((x - lo) / width).floor() as usize).min(n_bins - 1)
    } else {
        0
    }
}
