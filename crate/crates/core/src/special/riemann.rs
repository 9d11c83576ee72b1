//! Riemann and Hurwitz zeta functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{expm1, log_gamma, BERNOULLI_EVEN};
use crate::error::{Error, Result};

/// `ζ'(-1)`.
#[allow(clippy::excessive_precision)]
pub const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_92;

const BORWEIN_N: usize = 60;

fn borwein_tail() -> &'static [f64; BORWEIN_N + 1] {
    use std::sync::OnceLock;
    static TAIL: OnceLock<[f64; BORWEIN_N + 1]> = OnceLock::new();
    TAIL.get_or_init(|| {
        let n = BORWEIN_N as f64;
        let mut terms = [0.0; BORWEIN_N + 1];
        let mut t = 1.0;
        for (i, slot) in terms.iter_mut().enumerate() {
            *slot = t;
            let fi = i as f64;
            t *= 4.0 * (n + fi) * (n - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        }
        // tail[k] = d_n - d_k = Σ_{i>k} terms[i]; tail[n] holds d_n
        let mut tail = [0.0; BORWEIN_N + 1];
        let mut acc = 0.0;
        for k in (0..BORWEIN_N).rev() {
            acc += terms[k + 1];
            tail[k] = acc;
        }
        tail[BORWEIN_N] = acc + terms[0];
        tail
    })
}

/// Dirichlet eta `η(s) = Σ (-1)^{k} (k+1)^{-s}` by Borwein's acceleration.
fn dirichlet_eta(s: Complex64) -> Complex64 {
    let tail = borwein_tail();
    let dn = tail[BORWEIN_N];
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, e) in tail.iter().take(BORWEIN_N).enumerate() {
        let term = (-s * ((k + 1) as f64).ln()).exp() * *e;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / dn
}

/// Riemann zeta, continued to `C \ {1}`.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if s.re < 0.0 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
        if s.im == 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let one_minus = 1.0 - s;
        let log_pref = s * 2f64.ln() + (s - 1.0) * PI.ln() + log_gamma(one_minus)?;
        return Ok(log_pref.exp() * (s * (PI / 2.0)).sin() * riemann_zeta(one_minus)?);
    }
    // 1 - 2^{1-s} = -expm1((1-s) ln 2)
    let denom = -expm1((1.0 - s) * 2f64.ln());
    Ok(dirichlet_eta(s) / denom)
}

/// Hurwitz zeta `Σ_{k≥0} (k + a)^{-z}` for `Re z > 1`, `a > 0`.
pub fn hurwitz_zeta(z: Complex64, a: f64) -> Result<Complex64> {
    if !(z.re > 1.0) || !(a > 0.0) {
        return Err(Error::DomainError(format!("hurwitz zeta needs Re z > 1 and a > 0, got z={z}, a={a}")));
    }
    let threshold = 20.0f64.max(z.norm());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut x = a;
    while x < threshold {
        sum += (-z * x.ln()).exp();
        x += 1.0;
    }
    // Euler–Maclaurin from x
    let lx = x.ln();
    let x_pow = (-z * lx).exp();
    sum += x_pow * x / (z - 1.0) + x_pow * 0.5;
    let mut rising = z; // (z)_{2k-1}
    let mut xp = x_pow / x; // x^{-z-2k+1}
    let mut fact = 2.0; // (2k)!
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = rising * xp * (b / fact);
        sum += term;
        let kk = (k + 1) as f64;
        rising *= (z + 2.0 * kk - 1.0) * (z + 2.0 * kk);
        xp /= x * x;
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!((riemann_zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-14);
        assert!((riemann_zeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-14);
        assert_eq!(riemann_zeta(c(-2.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((riemann_zeta(c(4.0, 0.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-14);
        assert_eq!(riemann_zeta(c(1.0, 0.0)), Err(Error::PoleAtOne));
    }

    #[test]
    fn first_nontrivial_zero() {
        let z = riemann_zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12, "{z}");
    }

    #[test]
    fn derivative_at_minus_one() {
        let h = 1e-5;
        let d = (riemann_zeta(c(-1.0 + h, 0.0)).unwrap() - riemann_zeta(c(-1.0 - h, 0.0)).unwrap()) / (2.0 * h);
        assert!((d.re - ZETA_PRIME_MINUS_ONE).abs() < 1e-8);
    }

    #[test]
    fn cusp_residue_limit() {
        for eps in [1e-4, -1e-4] {
            let s = c(0.5 + eps, 0.0);
            let v =
                (2.0 * s - 1.0) * gamma(s).unwrap().powi(2) * (s * 4f64.ln()).exp() * riemann_zeta(2.0 * s).unwrap()
                    / (2.0 * PI * gamma(2.0 * s).unwrap());
            assert!((v - 1.0).norm() < 1e-3, "{v}");
        }
    }

    #[test]
    fn continuous_across_reflection_line() {
        for im in [0.0, 2.0, -7.5] {
            let left = riemann_zeta(c(-1e-7, im)).unwrap();
            let right = riemann_zeta(c(1e-7, im)).unwrap();
            assert!((left - right).norm() < 1e-5, "{left} {right}");
        }
    }

    #[test]
    fn hurwitz_reduces_to_riemann() {
        let z = c(2.5, 1.0);
        let h = hurwitz_zeta(z, 1.0).unwrap();
        assert!((h - riemann_zeta(z).unwrap()).norm() < 1e-13);
        let h3 = hurwitz_zeta(z, 3.0).unwrap();
        let manual = riemann_zeta(z).unwrap() - 1.0 - (-z * 2f64.ln()).exp();
        assert!((h3 - manual).norm() < 1e-13);
        let big = hurwitz_zeta(c(3.0, 0.0), 1e5).unwrap();
        assert!((big.re - 1.0 / (2.0 * 1e10) * (1.0 + 1e-5 + 0.5e-10)).abs() < 1e-22);
        assert!(hurwitz_zeta(c(1.0, 0.0), 1.0).is_err());
    }
}
