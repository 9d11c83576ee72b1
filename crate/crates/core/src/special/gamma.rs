//! Log-Gamma and polygamma functions on the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Even-index Bernoulli numbers `B_2, B_4, ..., B_20`.
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

fn check_pole(s: Complex64) -> Result<()> {
    if is_nonpositive_integer(s) || !s.re.is_finite() || !s.im.is_finite() {
        Err(Error::PoleAtNonPositiveInteger(s))
    } else {
        Ok(())
    }
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        series += term * (b / (n * (n - 1.0)));
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Principal branch of `log Γ(s)`, continuous off the negative real axis.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    const SHIFT_TO: f64 = 7.0;
    if s.re >= SHIFT_TO {
        return Ok(stirling(s));
    }
    let n = (SHIFT_TO - s.re).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (s + k as f64).ln();
    }
    Ok(stirling(s + n as f64) - acc)
}

/// `Γ(s)` via `exp(log Γ(s))`.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    Ok(log_gamma(s)?.exp())
}

/// Polygamma `ψ^{(n)}(s)` for `n ≥ 0`, with `ψ^{(0)} = Γ'/Γ`.
///
/// Uses the recurrence to move to `Re s ≥ 10`, then the asymptotic series.
pub fn polygamma(n: u32, s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    const SHIFT_TO: f64 = 10.0;
    let mut z = s;
    let mut acc = Complex64::new(0.0, 0.0);
    let nf = n as f64;
    let fact_n: f64 = (1..=n).map(|k| k as f64).product();
    // ψ^{(n)}(z) = ψ^{(n)}(z+1) - (-1)^n n!/z^{n+1}
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    while z.re < SHIFT_TO {
        acc -= z.powi(-(n as i32) - 1) * (sign * fact_n);
        z += 1.0;
    }
    let inv = z.inv();
    let asym = if n == 0 {
        let inv2 = inv * inv;
        let mut term = inv2;
        let mut series = Complex64::new(0.0, 0.0);
        for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(9) {
            series += term * (b / (2.0 * (k as f64 + 1.0)));
            term *= inv2;
        }
        z.ln() - inv * 0.5 - series
    } else {
        // (-1)^{n+1} [ (n-1)!/z^n + n!/(2 z^{n+1}) + Σ B_{2k} (2k+n-1)!/((2k)! z^{2k+n}) ]
        let fact_nm1 = fact_n / nf;
        let zn = inv.powi(n as i32);
        let mut total = zn * fact_nm1 + zn * inv * (fact_n / 2.0);
        let inv2 = inv * inv;
        let mut zpow = zn * inv2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(9) {
            let two_k = 2 * (k as u32 + 1);
            // (2k+n-1)!/(2k)! = Π_{j=2k+1}^{2k+n-1} j
            let ratio: f64 = ((two_k + 1)..(two_k + n)).map(|j| j as f64).product();
            total += zpow * (b * ratio);
            zpow *= inv2;
        }
        total * (-sign)
    };
    Ok(asym + acc)
}

pub fn digamma(s: Complex64) -> Result<Complex64> {
    polygamma(0, s)
}

pub fn trigamma(s: Complex64) -> Result<Complex64> {
    polygamma(1, s)
}

/// `cot(πz)` evaluated through `e^{2πiz}` on the half-plane where it is bounded.
pub fn cot_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return cot_pi(z.conj()).conj();
    }
    let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    Complex64::new(0.0, 1.0) * (q + 1.0) / (q - 1.0)
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let ex1 = x.exp_m1();
    let half = (0.5 * y).sin();
    let cosm1 = -2.0 * half * half;
    Complex64::new(ex1 * y.cos() + cosm1, x.exp() * y.sin())
}

/// `log(1 + z)`, accurate for small `|z|`, principal branch.
pub fn ln_1p(z: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p();
    let im = z.im.atan2(1.0 + z.re);
    Complex64::new(re, im)
}
