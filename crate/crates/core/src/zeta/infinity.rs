use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::barnes::log_barnes_gamma2;
use crate::special::gamma::{is_nonpositive_integer, log_gamma, polygamma};

/// `log Z_∞(s) = -χ [s log 2π + 2 log Γ₂(s) - log Γ(s)]`.
pub fn log_zeta_infinity(s: Complex64, chi: i64) -> Result<Complex64> {
    if chi > 0 {
        return Err(Error::DomainError(format!("Euler characteristic must be ≤ 0, got {chi}")));
    }
    if chi == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::PoleOrZero(s));
    }
    let bracket = s * (2.0 * PI).ln() + 2.0 * log_barnes_gamma2(s)? - log_gamma(s)?;
    Ok(-(chi as f64) * bracket)
}

pub fn zeta_infinity(s: Complex64, chi: i64) -> Result<Complex64> {
    Ok(log_zeta_infinity(s, chi)?.exp())
}

/// Derivatives of `log Z_∞`; the first is `χ(2s-1)(ψ(s) - 1)`.
pub fn log_zeta_infinity_derivative(order: u32, s: Complex64, chi: i64) -> Result<Complex64> {
    if chi > 0 {
        return Err(Error::DomainError(format!("Euler characteristic must be ≤ 0, got {chi}")));
    }
    if !(1..=3).contains(&order) {
        return Err(Error::Unsupported(format!("log-derivative of order {order}")));
    }
    if chi == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::PoleOrZero(s));
    }
    let x = chi as f64;
    let a = 2.0 * s - 1.0;
    let v = match order {
        1 => a * (polygamma(0, s)? - 1.0),
        2 => 2.0 * (polygamma(0, s)? - 1.0) + a * polygamma(1, s)?,
        _ => 4.0 * polygamma(1, s)? + a * polygamma(2, s)?,
    };
    Ok(x * v)
}
