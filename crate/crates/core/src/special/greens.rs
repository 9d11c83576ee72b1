//! The free resolvent kernel of the hyperbolic plane as a function of
//! `σ = cosh²(d/2)`:
//!
//! `g_s(σ) = (1/4π) ∫₀¹ t^{s-1} (1-t)^{s-1} (σ - t)^{-s} dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{digamma, log_gamma, EULER_GAMMA};
use super::quadrature::{tanh_sinh, tanh_sinh_raw, Integral, QuadratureBudget};
use crate::error::{Error, Result};

const INV_4PI: f64 = 1.0 / (4.0 * PI);

/// Below this `σ - 1` the two-term logarithmic expansion replaces quadrature.
const NEAR_DIAGONAL: f64 = 1e-8;

/// `g_s(σ)` by tanh-sinh quadrature.
pub fn greens_function(s: Complex64, sigma: f64, budget: &QuadratureBudget) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::DomainError(format!("Green's function needs Re s > 0, got {s}")));
    }
    if !(sigma > 1.0) {
        return Err(Error::DomainError(format!("Green's function needs σ > 1, got {sigma}")));
    }
    let r = greens_raw(s, sigma - 1.0, budget);
    let tol = budget.abs_tol.max(budget.rel_tol * r.value.norm());
    if r.error <= tol {
        Ok(r.value)
    } else {
        Err(Error::BudgetExceeded { estimate: r.value, error: r.error })
    }
}

/// `g_s(1 + δ)` without error signalling; `δ` is passed directly to keep
/// precision near the diagonal.
pub(crate) fn greens_raw(s: Complex64, delta: f64, budget: &QuadratureBudget) -> Integral {
    if delta < NEAR_DIAGONAL {
        return Integral {
            value: greens_near_diagonal(s, delta),
            error: delta * delta * (1.0 + s.norm()).powi(4),
            nodes: 0,
        };
    }
    let sm1 = s - 1.0;
    if delta > 1.0 {
        // factor σ^{-s} out so relative tolerances apply to the bounded remainder
        let sigma = 1.0 + delta;
        let inv = 1.0 / sigma;
        let f = |t: f64, dl: f64, dr: f64| -> Complex64 {
            let l1p = (-t * inv).ln_1p();
            (sm1 * (dl.ln() + dr.ln()) - s * l1p).exp()
        };
        let r = tanh_sinh_raw(&f, 0.0, 1.0, budget);
        let scale = (-s * sigma.ln()).exp() * INV_4PI;
        return Integral { value: r.value * scale, error: r.error * scale.norm(), nodes: r.nodes };
    }
    let f = |_t: f64, dl: f64, dr: f64| -> Complex64 { (sm1 * (dl.ln() + dr.ln()) - s * (delta + dr).ln()).exp() };
    let r = tanh_sinh_raw(&f, 0.0, 1.0, budget);
    Integral { value: r.value * INV_4PI, error: r.error * INV_4PI, nodes: r.nodes }
}

/// Two terms of the logarithmic expansion of `g_s(1 + δ)` at the diagonal.
pub fn greens_near_diagonal(s: Complex64, delta: f64) -> Complex64 {
    let sigma = 1.0 + delta;
    let w = delta / sigma; // 1 - 1/σ
    let lw = w.ln();
    let psi0 = digamma(s).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let psi1 = digamma(s + 1.0).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let t0 = -2.0 * EULER_GAMMA - 2.0 * psi0 - lw;
    let t1 = s * s * (2.0 * (1.0 - EULER_GAMMA) - 2.0 * psi1 - lw) * w;
    (-s * sigma.ln()).exp() * (t0 + t1) * INV_4PI
}

/// Coefficients `c_j` with `g_s(1 + u²) = Σ_j c_j u^{-2s-2j}` for `u > 1`.
pub fn greens_large_argument_coeffs(s: Complex64, terms: usize) -> Result<Vec<Complex64>> {
    let beta = (2.0 * log_gamma(s)? - log_gamma(2.0 * s)?).exp() * INV_4PI;
    // a_n = (s)_n² / ((2s)_n n!)
    let mut a = Vec::with_capacity(terms);
    let mut an = Complex64::new(1.0, 0.0);
    for n in 0..terms {
        a.push(an);
        let nf = n as f64;
        an *= (s + nf) * (s + nf) / ((2.0 * s + nf) * (nf + 1.0));
    }
    let mut out = Vec::with_capacity(terms);
    for j in 0..terms {
        let mut cj = Complex64::new(0.0, 0.0);
        for (n, an) in a.iter().enumerate().take(j + 1) {
            let m = j - n;
            // binom(-s-n, m)
            let mut b = Complex64::new(1.0, 0.0);
            for i in 0..m {
                b *= (-s - (n + i) as f64) / (i as f64 + 1.0);
            }
            cj += *an * b;
        }
        out.push(cj * beta);
    }
    Ok(out)
}

fn check_half_plane(s: Complex64) -> Result<()> {
    if s.re > 0.5 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("integral needs Re s > 1/2, got {s}")))
    }
}

/// `(2s-1) ∫_{-∞}^{∞} g_s((1+t²)(1+κ)²/(4κ)) dt`, by nested quadrature over `t = tan θ`.
pub fn greens_radial_integral(s: Complex64, kappa: f64, budget: &QuadratureBudget) -> Result<Complex64> {
    check_half_plane(s)?;
    if !(kappa > 0.0) {
        return Err(Error::DomainError(format!("κ must be positive, got {kappa}")));
    }
    let a = (1.0 + kappa).powi(2) / (4.0 * kappa);
    let a_minus_1 = (1.0 - kappa).powi(2) / (4.0 * kappa);
    let inner = QuadratureBudget { max_nodes: budget.max_nodes, abs_tol: 1e-300, rel_tol: budget.rel_tol.min(1e-12) };
    let f = |_th: f64, dl: f64, dr: f64| -> Complex64 {
        // tan θ and sec²θ from the closer endpoint
        let (tan, sec2) = if dl <= dr {
            let t = dl.tan();
            (t, 1.0 + t * t)
        } else {
            let sn = dr.sin();
            let cs = dr.cos();
            (cs / sn, 1.0 / (sn * sn))
        };
        let delta = a_minus_1 + a * tan * tan;
        greens_raw(s, delta, &inner).value * sec2
    };
    let r = tanh_sinh(f, 0.0, PI / 2.0, budget)?;
    Ok(r.value * 2.0 * (2.0 * s - 1.0))
}

/// Closed form of [`greens_radial_integral`]: `max(κ,1/κ)^{1/2-s} / (κ^{1/2} + κ^{-1/2})`.
pub fn greens_radial_closed_form(s: Complex64, kappa: f64) -> Complex64 {
    let m = kappa.max(1.0 / kappa);
    ((0.5 - s) * m.ln()).exp() / (kappa.sqrt() + 1.0 / kappa.sqrt())
}

/// `4(2s-1) ∫₀^∞ g_s(1 + u²) du`; equals 1 for `Re s > 1/2`.
pub fn greens_half_line_integral(s: Complex64, budget: &QuadratureBudget) -> Result<Complex64> {
    check_half_plane(s)?;
    Ok(greens_radial_integral(s, 1.0, budget)? * 2.0)
}
