use std::f64::consts::FRAC_PI_2;

use super::{GbmSpec, PayoffHistogram, PricingError};
use crate::numerics::RandomStream;
use crate::statevector::{attach_payoff_ancilla, grover_power};

/// Floor and ceiling applied to `P_k` inside the log-likelihood.
pub const LIKELIHOOD_CLAMP: f64 = 1e-12;
const GRID_POINTS: usize = 10_000;
const GOLDEN_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeMethod {
    Exact,
    Shots,
    Mlqae,
}

impl AmplitudeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            AmplitudeMethod::Exact => "exact-amplitude",
            AmplitudeMethod::Shots => "shot-amplitude",
            AmplitudeMethod::Mlqae => "mlqae",
        }
    }
}

/// Estimated ancilla-one probability `a = sin^2(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeEstimate {
    pub a_hat: f64,
    pub theta_hat: f64,
    pub method: AmplitudeMethod,
    /// Applications of the loader `A`: a shot at Grover power `k` costs `2k + 1`.
    pub total_oracle_calls: u64,
    pub shots_per_level: u64,
}

impl AmplitudeEstimate {
    fn from_amplitude(a: f64, method: AmplitudeMethod, calls: u64, shots: u64) -> Self {
        let a = a.clamp(0.0, 1.0);
        Self {
            a_hat: a,
            theta_hat: a.sqrt().asin(),
            method,
            total_oracle_calls: calls,
            shots_per_level: shots,
        }
    }

    fn from_angle(theta: f64, method: AmplitudeMethod, calls: u64, shots: u64) -> Self {
        Self {
            a_hat: theta.sin().powi(2),
            theta_hat: theta,
            method,
            total_oracle_calls: calls,
            shots_per_level: shots,
        }
    }
}

/// `exp(-rT) B a`.
pub fn price_from_amplitude(a: f64, bound: f64, rate: f64, maturity: f64) -> Result<f64, PricingError> {
    if !(0.0..=1.0).contains(&a) {
        return Err(PricingError::AmplitudeOutOfRange(a));
    }
    Ok((-rate * maturity).exp() * bound * a)
}

/// Reads `a` exactly from the prepared statevector.
pub fn exact_amplitude_price(h: &PayoffHistogram, spec: &GbmSpec) -> Result<(f64, AmplitudeEstimate), PricingError> {
    let a = if h.bound > 0.0 {
        attach_payoff_ancilla(&h.oracle()?).ancilla_one_probability()?
    } else {
        0.0
    };
    let est = AmplitudeEstimate::from_amplitude(a, AmplitudeMethod::Exact, 1, 0);
    Ok((price_from_amplitude(est.a_hat, h.bound, spec.rate, spec.maturity)?, est))
}

/// Estimates `a` as the ancilla-one frequency over `shots` measurements.
pub fn shot_amplitude_price(
    h: &PayoffHistogram,
    spec: &GbmSpec,
    shots: u64,
    rng: &mut RandomStream,
) -> Result<(f64, AmplitudeEstimate), PricingError> {
    if shots == 0 {
        return Err(PricingError::ZeroShots);
    }
    let hits = ancilla_hits(h, 0, shots, rng)?;
    let est = AmplitudeEstimate::from_amplitude(hits as f64 / shots as f64, AmplitudeMethod::Shots, shots, shots);
    Ok((price_from_amplitude(est.a_hat, h.bound, spec.rate, spec.maturity)?, est))
}

fn ancilla_hits(h: &PayoffHistogram, k: usize, shots: u64, rng: &mut RandomStream) -> Result<u64, PricingError> {
    let state = grover_power(&h.oracle()?, k);
    let counts = state.sample_counts(shots, rng)?;
    Ok(counts.iter().filter(|(idx, _)| *idx & 1 == 1).map(|(_, c)| c).sum())
}

/// Ancilla-one probability after `k` Grover iterates, from the simulator.
/// Equals `sin^2((2k + 1) theta)` with `sin^2 theta = a`.
pub fn grover_ancilla_probability(h: &PayoffHistogram, k: usize) -> Result<f64, PricingError> {
    Ok(grover_power(&h.oracle()?, k).ancilla_one_probability()?)
}

/// Measurement record at one Grover power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCounts {
    pub k: usize,
    pub hits: u64,
    pub shots: u64,
}

/// `L(theta) = sum_k n_k ln P_k + (N_k - n_k) ln(1 - P_k)` with
/// `P_k = sin^2((2k + 1) theta)` clamped to `[clamp, 1 - clamp]`.
pub fn log_likelihood(theta: f64, levels: &[LevelCounts], clamp: f64) -> f64 {
    levels
        .iter()
        .map(|l| {
            let p = ((2 * l.k + 1) as f64 * theta).sin().powi(2).clamp(clamp, 1.0 - clamp);
            let misses = l.shots - l.hits;
            let mut v = 0.0;
            if l.hits > 0 {
                v += l.hits as f64 * p.ln();
            }
            if misses > 0 {
                v += misses as f64 * (1.0 - p).ln();
            }
            v
        })
        .sum()
}

/// Maximum-likelihood angle on `[0, pi/2]`: dense grid search followed by
/// golden-section refinement around the best grid point. The grid point
/// is kept unless refinement strictly improves on it.
pub fn mlqae_from_counts(levels: &[LevelCounts], clamp: f64) -> Result<f64, PricingError> {
    if levels.is_empty() {
        return Err(PricingError::EmptySchedule);
    }
    let step = FRAC_PI_2 / (GRID_POINTS - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..GRID_POINTS {
        let v = log_likelihood(i as f64 * step, levels, clamp);
        if v > best.1 {
            best = (i, v);
        }
    }
    let grid_theta = best.0 as f64 * step;
    let mut lo = (grid_theta - step).max(0.0);
    let mut hi = (grid_theta + step).min(FRAC_PI_2);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = log_likelihood(c, levels, clamp);
    let mut fd = log_likelihood(d, levels, clamp);
    while hi - lo > GOLDEN_TOL {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = log_likelihood(c, levels, clamp);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = log_likelihood(d, levels, clamp);
        }
    }
    let refined = 0.5 * (lo + hi);
    if log_likelihood(refined, levels, clamp) > best.1 {
        Ok(refined)
    } else {
        Ok(grid_theta)
    }
}

/// Maximum-likelihood amplitude estimation over a Grover-power schedule.
/// Level `i` of the schedule samples from `rng.substream(i)`.
pub fn mlqae_estimate(
    h: &PayoffHistogram,
    schedule: &[usize],
    shots_per_level: u64,
    rng: &RandomStream,
) -> Result<AmplitudeEstimate, PricingError> {
    if schedule.is_empty() {
        return Err(PricingError::EmptySchedule);
    }
    if shots_per_level == 0 {
        return Err(PricingError::ZeroShots);
    }
    let oracle = h.oracle()?;
    let mut levels = Vec::with_capacity(schedule.len());
    let mut calls = 0u64;
    for (i, &k) in schedule.iter().enumerate() {
        let mut s = rng.substream(i as u64);
        let counts = grover_power(&oracle, k).sample_counts(shots_per_level, &mut s)?;
        let hits = counts.iter().filter(|(idx, _)| *idx & 1 == 1).map(|(_, c)| c).sum();
        levels.push(LevelCounts {
            k,
            hits,
            shots: shots_per_level,
        });
        calls += shots_per_level * (2 * k as u64 + 1);
    }
    let theta = mlqae_from_counts(&levels, LIKELIHOOD_CLAMP)?;
    Ok(AmplitudeEstimate::from_angle(
        theta,
        AmplitudeMethod::Mlqae,
        calls,
        shots_per_level,
    ))
}
