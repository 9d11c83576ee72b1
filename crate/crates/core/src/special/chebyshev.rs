//! Chebyshev interpolation of complex-valued functions on an interval.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `f(x) ≈ Σ_k c_k T_k(t)` with `t` the affine image of `x ∈ [a, b]` in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct ChebyshevSeries {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<Complex64>,
}

impl ChebyshevSeries {
    /// Interpolates `f` at `n` Chebyshev points of the first kind.
    pub fn interpolate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Self {
        let values: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = (PI * (k as f64 + 0.5) / n as f64).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * t)
            })
            .collect();
        Self::from_values(&values, a, b)
    }

    /// Builds the series from samples at the first-kind nodes in the order `k = 0..n`.
    pub fn from_values(values: &[Complex64], a: f64, b: f64) -> Self {
        let n = values.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (j, cj) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                acc += v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos();
            }
            *cj = acc * (2.0 / n as f64);
        }
        if let Some(c0) = coeffs.first_mut() {
            *c0 *= 0.5;
        }
        Self { a, b, coeffs }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        // Clenshaw
        let mut b1 = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + b1 * (2.0 * t) - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + b1 * t - b2
    }

    /// Antiderivative vanishing at `a`.
    pub fn antiderivative(&self) -> Self {
        let n = self.coeffs.len();
        let half = 0.5 * (self.b - self.a);
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or_default();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = if k == 1 { c(0) - c(2) * 0.5 } else { (c(k - 1) - c(k + 1)) / (2.0 * k as f64) } * half;
        }
        // F(-1) = Σ C_k (-1)^k = 0
        let mut at_left = Complex64::new(0.0, 0.0);
        for (k, v) in out.iter().enumerate().skip(1) {
            if k % 2 == 0 {
                at_left += v;
            } else {
                at_left -= v;
            }
        }
        out[0] = -at_left;
        Self { a: self.a, b: self.b, coeffs: out }
    }

    /// Magnitude of the trailing coefficients, a proxy for interpolation error.
    pub fn tail_magnitude(&self) -> f64 {
        self.coeffs.iter().rev().take(3).map(|c| c.norm()).fold(0.0, f64::max)
    }
}
