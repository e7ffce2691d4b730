use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::NumericsError;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF, accurate in both tails.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Inverse of [`std_normal_cdf`] on the open unit interval.
pub fn std_normal_quantile(p: f64) -> Result<f64, NumericsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(NumericsError::Domain(format!(
            "normal quantile needs 0 < p < 1, got {p}"
        )));
    }
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    // one Newton polish step on the CDF
    let pdf = std_normal_pdf(x);
    if pdf > 0.0 {
        x -= (std_normal_cdf(x) - p) / pdf;
    }
    Ok(x)
}
