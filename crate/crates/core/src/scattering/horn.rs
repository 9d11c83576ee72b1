use num_complex::Complex64;
use rayon::prelude::*;

use super::{ModelTraceReport, TraceMethod};
use crate::error::{Error, Result};
use crate::special::chebyshev::ChebyshevSeries;
use crate::special::gamma::{digamma, is_nonpositive_integer, EULER_GAMMA};
use crate::special::greens::{greens_large_argument_coeffs, greens_raw};
use crate::special::quadrature::QuadratureBudget;
use crate::special::riemann::hurwitz_zeta;

const LN2: f64 = std::f64::consts::LN_2;

/// `Φ_H(s) = -log 2 - ψ(s + 1/2) + 1/(2s - 1)`.
pub fn phi_horn(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(0.5, 0.0) {
        return Err(Error::PoleAtHalf);
    }
    if is_nonpositive_integer(s + 0.5) {
        return Err(Error::DigammaPole(s + 0.5));
    }
    Ok(-LN2 - digamma(s + 0.5)? + (2.0 * s - 1.0).inv())
}

/// `Υ_H(s) = -log 4 - ψ(s - 1/2) - ψ(1/2 - s)`.
pub fn upsilon_horn(s: Complex64) -> Result<Complex64> {
    for z in [s - 0.5, 0.5 - s] {
        if is_nonpositive_integer(z) {
            return Err(Error::DigammaPole(z));
        }
    }
    Ok(-2.0 * LN2 - digamma(s - 0.5)? - digamma(0.5 - s)?)
}

/// `w = log u` range covered by the Chebyshev panels.
const W_MIN: f64 = -12.0;
const W_MAX: f64 = 4.0;
const PANELS: usize = 16;
const PANEL_NODES: usize = 32;
const LARGE_TERMS: usize = 8;

/// `T(v) = ∫_v^∞ g_s(1 + u²) du` for `v > 0`.
struct TailIntegral {
    s: Complex64,
    panels: Vec<ChebyshevSeries>,
    /// `above[i]`: integral over panels `i+1..` plus the part beyond `e^{W_MAX}`.
    above: Vec<Complex64>,
    large: Vec<Complex64>,
    /// `T(e^{W_MIN})`.
    at_min: Complex64,
    interpolation_error: f64,
}

impl TailIntegral {
    fn new(s: Complex64, budget: &QuadratureBudget) -> Result<Self> {
        let width = (W_MAX - W_MIN) / PANELS as f64;
        let inner = QuadratureBudget { rel_tol: budget.rel_tol.min(1e-12), abs_tol: 1e-300, ..*budget };
        let panels: Vec<(ChebyshevSeries, f64)> = (0..PANELS)
            .into_par_iter()
            .map(|i| {
                let a = W_MIN + width * i as f64;
                let mut worst = 0.0f64;
                let values: Vec<Complex64> = (0..PANEL_NODES)
                    .map(|k| {
                        let t = (std::f64::consts::PI * (k as f64 + 0.5) / PANEL_NODES as f64).cos();
                        let w = a + width * 0.5 * (1.0 + t);
                        let u = w.exp();
                        let r = greens_raw(s, u * u, &inner);
                        worst = worst.max(r.error * u);
                        r.value * u
                    })
                    .collect();
                let series = ChebyshevSeries::from_values(&values, a, a + width);
                let err = series.tail_magnitude() * width + worst * width;
                (series.antiderivative(), err)
            })
            .collect();
        let interpolation_error: f64 = panels.iter().map(|(_, e)| e).sum();
        let panels: Vec<ChebyshevSeries> = panels.into_iter().map(|(p, _)| p).collect();

        let large = greens_large_argument_coeffs(s, LARGE_TERMS)?;
        let v_max = W_MAX.exp();
        let beyond: Complex64 = large
            .iter()
            .enumerate()
            .map(|(j, c)| c * ((1.0 - 2.0 * s - 2.0 * j as f64) * v_max.ln()).exp() / (2.0 * s + 2.0 * j as f64 - 1.0))
            .sum();
        let mut above = vec![Complex64::new(0.0, 0.0); PANELS];
        let mut acc = beyond;
        for i in (0..PANELS).rev() {
            above[i] = acc;
            acc += panels[i].eval(panels[i].b);
        }
        let at_min = acc;
        if !interpolation_error.is_finite() {
            return Err(Error::BudgetExceeded { estimate: at_min, error: interpolation_error });
        }
        Ok(Self { s, panels, above, large, at_min, interpolation_error })
    }

    fn eval(&self, v: f64) -> Complex64 {
        let w = v.ln();
        if w >= W_MAX {
            return self
                .large
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    c * ((1.0 - 2.0 * self.s - 2.0 * j as f64) * w).exp() / (2.0 * self.s + 2.0 * j as f64 - 1.0)
                })
                .sum();
        }
        if w < W_MIN {
            // g ≈ (1/4π)(-2 log u + C) with C = -2ψ(s) - 2γ
            let c = -2.0 * digamma(self.s).unwrap_or_default() - 2.0 * EULER_GAMMA;
            let a = W_MIN.exp();
            let prim = |u: f64| -> Complex64 { -2.0 * (u * u.ln() - u) + c * u };
            return self.at_min + (prim(a) - prim(v)) / (4.0 * std::f64::consts::PI);
        }
        let width = (W_MAX - W_MIN) / PANELS as f64;
        let i = (((w - W_MIN) / width) as usize).min(PANELS - 1);
        let p = &self.panels[i];
        p.eval(p.b) - p.eval(w) + self.above[i]
    }

    /// `Σ_{k≥1} T(kε/2)/k`, with the `k` tail summed through Hurwitz zeta values.
    fn image_sum(&self, eps: f64) -> Result<Complex64> {
        let v_max = W_MAX.exp();
        let k_max = (2.0 * v_max / eps).floor() as u64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=k_max {
            acc += self.eval(k as f64 * eps / 2.0) / k as f64;
        }
        for (j, c) in self.large.iter().enumerate() {
            let p = 2.0 * self.s + 2.0 * j as f64;
            let scale = ((1.0 - p) * (eps / 2.0).ln()).exp() / (p - 1.0);
            acc += c * scale * hurwitz_zeta(p, (k_max + 1) as f64)?;
        }
        Ok(acc)
    }
}

/// Cutoffs `ε = 2^{-j}` used for the finite-part fit.
const EPS_EXPONENTS: [i32; 7] = [4, 5, 6, 7, 8, 9, 10];

/// Least-squares fit of `(ε, I(ε))` to `a + b log ε + c ε log ε + d ε`; returns `[a, b, c, d]`.
fn finite_part_fit(samples: &[(f64, Complex64)]) -> [Complex64; 4] {
    let n = samples.len();
    let basis = |e: f64| [1.0, e.ln(), e * e.ln(), e];
    let a = nalgebra::DMatrix::from_fn(n, 4, |i, j| basis(samples[i].0)[j]);
    let svd = a.svd(true, true);
    let solve = |rhs: Vec<f64>| -> Vec<f64> {
        let b = nalgebra::DVector::from_vec(rhs);
        svd.solve(&b, 1e-14).map(|x| x.iter().copied().collect()).unwrap_or_else(|_| vec![f64::NAN; 4])
    };
    let re = solve(samples.iter().map(|(_, v)| v.re).collect());
    let im = solve(samples.iter().map(|(_, v)| v.im).collect());
    [0, 1, 2, 3].map(|j| Complex64::new(re[j], im[j]))
}

/// Independent evaluation of `Φ_H(s)` from the horn's image sum of the
/// resolvent kernel.
///
/// With the cusp cut off at height `1/ε`, the regularized integral is
/// `I(ε) = 4(2s-1) Σ_{k≥1} T(kε/2)/k`, `T(v) = ∫_v^∞ g_s(1+u²) du`. It diverges
/// like `-log ε`; the finite part is the constant of a fit over seven cutoffs.
pub fn phi_horn_quadrature(s: Complex64, budget: &QuadratureBudget) -> Result<ModelTraceReport> {
    if !(s.re > 0.5) {
        return Err(Error::DomainError(format!("horn quadrature needs Re s > 1/2, got {s}")));
    }
    let tail = TailIntegral::new(s, budget)?;
    let pref = 4.0 * (2.0 * s - 1.0);
    let samples: Vec<(f64, Complex64)> = EPS_EXPONENTS
        .par_iter()
        .map(|&j| {
            let eps = 2f64.powi(-j);
            tail.image_sum(eps).map(|v| (eps, pref * v))
        })
        .collect::<Result<_>>()?;
    let full = finite_part_fit(&samples);
    let coarse = finite_part_fit(&samples[..samples.len() - 1]);
    let fine = finite_part_fit(&samples[1..]);
    let spread = (full[0] - coarse[0]).norm().max((full[0] - fine[0]).norm());
    // the divergent coefficient is exactly -1; its deviation is a further check
    let slope = (full[1] + 1.0).norm();
    let error_estimate = spread + slope + pref.norm() * tail.interpolation_error * 4.0;
    if !(full[0].re.is_finite() && full[0].im.is_finite()) || error_estimate > 1e-2 {
        return Err(Error::BudgetExceeded { estimate: full[0], error: error_estimate });
    }
    Ok(ModelTraceReport { s, value: full[0], method: TraceMethod::Quadrature, error_estimate })
}
