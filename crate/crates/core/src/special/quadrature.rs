//! Double-exponential (tanh-sinh) and Gauss–Kronrod quadrature for complex integrands.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Controls for a single adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureBudget {
    pub max_nodes: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureBudget {
    fn default() -> Self {
        Self { max_nodes: 20_000, abs_tol: 1e-13, rel_tol: 1e-12 }
    }
}

impl QuadratureBudget {
    pub fn new(max_nodes: usize, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ok_tol = |t: f64| t > 0.0 && t <= 1e-2;
        if max_nodes < 16 || !ok_tol(abs_tol) || !ok_tol(rel_tol) {
            return Err(Error::DomainError(format!(
                "invalid quadrature budget: max_nodes={max_nodes}, abs_tol={abs_tol}, rel_tol={rel_tol}"
            )));
        }
        Ok(Self { max_nodes, abs_tol, rel_tol })
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Result of an integration that did not error: value and error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub nodes: usize,
}

const T_MAX: f64 = 5.0;

/// Integrates `f` over `[a, b]` with tanh-sinh nodes.
///
/// The integrand receives `(x, x - a, b - x)`; the two distances are computed
/// without cancellation so endpoint singularities like `(x-a)^α` can be
/// evaluated accurately. Returns `BudgetExceeded` with the best estimate when
/// the node budget runs out before convergence.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, budget: &QuadratureBudget) -> Result<Integral>
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    let r = tanh_sinh_raw(&f, a, b, budget);
    if r.error <= budget.target(r.value) {
        Ok(r)
    } else {
        Err(Error::BudgetExceeded { estimate: r.value, error: r.error })
    }
}

/// Same as [`tanh_sinh`] but always returns the best estimate.
pub fn tanh_sinh_raw<F>(f: &F, a: f64, b: f64, budget: &QuadratureBudget) -> Integral
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    let len = b - a;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> Complex64 {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / (u.cosh() * u.cosh());
        // x - a = len/(1+e^{-2u}), b - x = len/(1+e^{2u})
        let dl = len / (1.0 + (-2.0 * u).exp());
        let dr = len / (1.0 + (2.0 * u).exp());
        if dl <= 0.0 || dr <= 0.0 || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = if dl < dr { a + dl } else { b - dr };
        let v = f(x, dl, dr);
        if v.re.is_finite() && v.im.is_finite() {
            v * (0.5 * len * w)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    let mut h = 0.5;
    let n0 = (T_MAX / h) as i64;
    let mut sum = node(0.0);
    for k in 1..=n0 {
        let t = k as f64 * h;
        sum += node(t) + node(-t);
    }
    let mut nodes = (2 * n0 + 1) as usize;
    let mut value = sum * h;
    let mut error = f64::INFINITY;
    loop {
        let next_h = h / 2.0;
        let n_new = (T_MAX / next_h) as i64;
        let cost = n_new as usize + 1;
        if nodes + cost > budget.max_nodes {
            break;
        }
        let mut add = Complex64::new(0.0, 0.0);
        let mut k = 1;
        while k <= n_new {
            let t = k as f64 * next_h;
            add += node(t) + node(-t);
            k += 2;
        }
        nodes += cost;
        sum += add;
        h = next_h;
        let new_value = sum * h;
        error = (new_value - value).norm();
        value = new_value;
        if error <= budget.target(value) && h <= 1.0 / 8.0 {
            break;
        }
    }
    Integral { value, error, nodes }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
#[allow(clippy::excessive_precision)]
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const GK_WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// One 15-point Kronrod panel on `[t0, t1]`, with the Gauss-7 difference as error.
pub fn gauss_kronrod_15<F>(f: &F, t0: f64, t1: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let c = 0.5 * (t0 + t1);
    let h = 0.5 * (t1 - t0);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for i in 0..8 {
        let x = GK_NODES[i];
        if x == 0.0 {
            let v = f(c);
            k += v * GK_WK[i];
            g += v * GK_WG[3];
        } else {
            let v1 = f(c - h * x);
            let v2 = f(c + h * x);
            k += (v1 + v2) * GK_WK[i];
            if i % 2 == 1 {
                g += (v1 + v2) * GK_WG[i / 2];
            }
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod on `[t0, t1]`; bisects panels until each meets `tol`
/// scaled by its length or `max_depth` is reached. Returns `(value, error, hit_depth_cap)`.
pub fn adaptive_gk<F>(f: &F, t0: f64, t1: f64, tol: f64, max_depth: u32) -> (Complex64, f64, bool)
where
    F: Fn(f64) -> Complex64,
{
    let mut stack = vec![(t0, t1, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut capped = false;
    let span = (t1 - t0).abs();
    while let Some((a, b, depth)) = stack.pop() {
        let (v, e) = gauss_kronrod_15(f, a, b);
        let local_tol = tol * ((b - a).abs() / span).max(1e-6);
        if e <= local_tol {
            total += v;
            err += e;
        } else if depth >= max_depth {
            total += v;
            err += e;
            capped = true;
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    (total, err, capped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn polynomial_and_exponential() {
        let b = QuadratureBudget::default();
        let r = tanh_sinh(|x, _, _| c(x * x), 0.0, 3.0, &b).unwrap();
        assert!((r.value.re - 9.0).abs() < 1e-12);
        let r = tanh_sinh(|x, _, _| Complex64::new(0.0, x).exp(), 0.0, 1.0, &b).unwrap();
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularities() {
        let b = QuadratureBudget::default();
        // ∫₀¹ x^{-1/2} (1-x)^{-1/2} dx = π
        let r = tanh_sinh(|_, dl, dr| c(1.0 / (dl * dr).sqrt()), 0.0, 1.0, &b).unwrap();
        assert!((r.value.re - std::f64::consts::PI).abs() < 1e-11, "{}", r.value);
        // ∫₀¹ log x dx = -1
        let r = tanh_sinh(|_, dl, _| c(dl.ln()), 0.0, 1.0, &b).unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let b = QuadratureBudget::new(16, 1e-14, 1e-14).unwrap();
        match tanh_sinh(|x, _, _| c((40.0 * x).sin()), 0.0, 10.0, &b) {
            Err(Error::BudgetExceeded { estimate, error }) => {
                assert!(estimate.re.is_finite());
                assert!(error > 0.0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(QuadratureBudget::new(8, 1e-10, 1e-10).is_err());
        assert!(QuadratureBudget::new(100, 0.5, 1e-10).is_err());
    }

    #[test]
    fn kronrod_adaptive() {
        let (v, e, capped) = adaptive_gk(&|t: f64| c(t.cos()), 0.0, 10.0, 1e-12, 30);
        assert!(!capped);
        assert!((v.re - 10f64.sin()).abs() < 1e-12, "{v} {e}");
    }
}
