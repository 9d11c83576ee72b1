//! Barnes double Gamma, normalized by `Γ₂(1) = 1` and `Γ₂(s+1) = Γ₂(s)/Γ(s)`.
//!
//! With this normalization `Γ₂ = 1/G` for the Barnes G-function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{is_nonpositive_integer, log_gamma, polygamma, BERNOULLI_EVEN};
use super::riemann::ZETA_PRIME_MINUS_ONE;
use crate::error::{Error, Result};

/// Real part above which the asymptotic expansion is used directly.
pub const ASYMPTOTIC_RE: f64 = 20.0;

/// `log G(w + 1)` for large `|w|`, `Re w > 0`.
pub fn log_barnes_g_asymptotic(w: Complex64) -> Complex64 {
    let lw = w.ln();
    let w2 = w * w;
    let mut total = w2 * 0.5 * lw - w2 * 0.75 + w * (0.5 * (2.0 * PI).ln()) - lw / 12.0 + ZETA_PRIME_MINUS_ONE;
    let inv2 = (w2).inv();
    let mut p = inv2;
    // Σ_{k≥1} B_{2k+2} / (4k(k+1) w^{2k})
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
        let kf = k as f64;
        total += p * (b / (4.0 * kf * (kf + 1.0)));
        p *= inv2;
    }
    total
}

/// Branch-consistent `log Γ₂(s)`.
///
/// The recurrence holds exactly in the computed values:
/// `log Γ₂(s+1) = log Γ₂(s) - log Γ(s)` with principal `log Γ`.
pub fn log_barnes_gamma2(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::PoleAtNonPositiveInteger(s));
    }
    if s.re >= ASYMPTOTIC_RE {
        return Ok(-log_barnes_g_asymptotic(s - 1.0));
    }
    let n = (ASYMPTOTIC_RE - s.re).ceil() as usize;
    let mut acc = -log_barnes_g_asymptotic(s + (n as f64 - 1.0));
    for j in 0..n {
        acc += log_gamma(s + j as f64)?;
    }
    Ok(acc)
}

/// `d^k/ds^k log Γ₂(s)` for `k = 1, 2, 3`, from `(log G)'(s) = (s-1)ψ(s) - s + 1/2 + log(2π)/2`.
pub fn log_barnes_gamma2_derivative(k: u32, s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::PoleAtNonPositiveInteger(s));
    }
    let v = match k {
        1 => (s - 1.0) * polygamma(0, s)? - s + 0.5 + 0.5 * (2.0 * PI).ln(),
        2 => polygamma(0, s)? + (s - 1.0) * polygamma(1, s)? - 1.0,
        3 => 2.0 * polygamma(1, s)? + (s - 1.0) * polygamma(2, s)?,
        _ => return Err(Error::Unsupported(format!("derivative order {k} of log Γ₂"))),
    };
    Ok(-v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `log G(n+1) = Σ_{k=1}^{n-1} log k!` for integers.
    fn log_g_integer(n: u32) -> f64 {
        let mut total = 0.0;
        let mut log_fact = 0.0;
        for k in 1..n {
            log_fact += (k as f64).ln();
            total += log_fact;
        }
        total
    }

    #[test]
    fn normalization_and_recurrence_examples() {
        assert!(log_barnes_gamma2(c(1.0, 0.0)).unwrap().norm() < 1e-12);
        assert!(log_barnes_gamma2(c(2.0, 0.0)).unwrap().norm() < 1e-12);
        assert!((log_barnes_gamma2(c(3.0, 0.0)).unwrap().re).abs() < 1e-12);
        assert!(log_barnes_gamma2(c(0.0, 0.0)).is_err());
        assert!(log_barnes_gamma2(c(-4.0, 0.0)).is_err());
    }

    #[test]
    fn integer_values_against_factorial_products() {
        for n in [5u32, 12, 24, 30] {
            let v = log_barnes_gamma2(c(n as f64 + 1.0, 0.0)).unwrap();
            let exact = -log_g_integer(n);
            assert!((v.re - exact).abs() < 1e-10 * (1.0 + exact.abs()), "n={n}: {v} vs {exact}");
        }
    }

    #[test]
    fn ladder_matches_asymptotic_at_25() {
        // ladder from a far asymptotic start must agree with the direct expansion at s = 25
        let s = c(25.0, 3.0);
        let direct = log_barnes_gamma2(s).unwrap();
        let mut ladder = -log_barnes_g_asymptotic(s + 59.0);
        for j in 0..60 {
            ladder += log_gamma(s + j as f64).unwrap();
        }
        let d = direct - ladder;
        let k = (d.im / (2.0 * PI)).round();
        assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-8, "{direct} vs {ladder}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for s in [c(0.7, 0.3), c(3.5, -2.0), c(25.0, 1.0)] {
            let h = 1e-5;
            let fd = (log_barnes_gamma2(s + h).unwrap() - log_barnes_gamma2(s - h).unwrap()) / (2.0 * h);
            let an = log_barnes_gamma2_derivative(1, s).unwrap();
            assert!((fd - an).norm() < 1e-6 * (1.0 + an.norm()), "{fd} vs {an}");
            let fd2 = (log_barnes_gamma2_derivative(1, s + h).unwrap()
                - log_barnes_gamma2_derivative(1, s - h).unwrap())
                / (2.0 * h);
            let an2 = log_barnes_gamma2_derivative(2, s).unwrap();
            assert!((fd2 - an2).norm() < 1e-6 * (1.0 + an2.norm()));
            let fd3 = (log_barnes_gamma2_derivative(2, s + h).unwrap()
                - log_barnes_gamma2_derivative(2, s - h).unwrap())
                / (2.0 * h);
            let an3 = log_barnes_gamma2_derivative(3, s).unwrap();
            assert!((fd3 - an3).norm() < 1e-6 * (1.0 + an3.norm()));
        }
    }

    proptest! {
        #[test]
        fn recurrence_holds(re in -6.0f64..30.0, im in -10.0f64..10.0) {
            let s = c(re, im);
            prop_assume!((s - s.re.round()).norm() > 1e-3);
            let d = log_barnes_gamma2(s + 1.0).unwrap() - log_barnes_gamma2(s).unwrap() + log_gamma(s).unwrap();
            let k = (d.im / (2.0 * PI)).round();
            prop_assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-9 * (1.0 + s.norm_sqr()));
        }
    }
}
