use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLES: usize = 12;
pub const MIN_FIT_START: f64 = 10.0;
const ROUND_WINDOW: f64 = 0.2;
const MIN_SINGULAR_RATIO: f64 = 1e-13;
const MAX_RELATIVE_RESIDUAL: f64 = 1e-4;

/// Coefficients read off from the growth of `log(Z_X Z_∞)` on a real ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub chi_est: f64,
    pub n_c_est: f64,
    /// `c₂, c₁, c₀` of the polynomial part.
    pub quad_coeffs: [f64; 3],
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `χ_est` rounded when within 0.2 of an integer.
    pub chi: Option<i64>,
    pub n_c: Option<i64>,
}

fn round_if_close(x: f64) -> Option<i64> {
    ((x - x.round()).abs() < ROUND_WINDOW).then_some(x.round() as i64)
}

fn basis(s: f64) -> [f64; 6] {
    let l = s.ln();
    [s * s * l, s * l, s * s, s, 1.0, l]
}

/// Least-squares fit of `a s² log s + b s log s + c₂s² + c₁s + c₀ + d log s` to
/// the real parts of `samples`.
///
/// `log Z_∞ = χ(s² log s - s log s) + O(s²)`, and each cusp contributes
/// `-log Γ(s - 1/2) = -s log s + O(s)`, so `χ = a` and `n_C = -(a + b)`.
pub fn invert_asymptotics(samples: &[(f64, Complex64)]) -> Result<AsymptoticFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::DomainError(format!("need at least {MIN_FIT_SAMPLES} samples, got {}", samples.len())));
    }
    if let Some((s, _)) = samples.iter().find(|(s, _)| !(*s >= MIN_FIT_START && s.is_finite())) {
        return Err(Error::DomainError(format!("samples must lie on s ≥ {MIN_FIT_START}, got {s}")));
    }
    let n = samples.len();
    let raw = DMatrix::from_fn(n, 6, |i, j| basis(samples[i].0)[j]);
    let scale: Vec<f64> = (0..6).map(|j| raw.column(j).norm()).collect();
    let a = DMatrix::from_fn(n, 6, |i, j| raw[(i, j)] / scale[j]);
    let y = DVector::from_iterator(n, samples.iter().map(|(_, v)| v.re));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let ratio = sv.min() / sv.max();
    if !(ratio > MIN_SINGULAR_RATIO) {
        return Err(Error::IllConditionedFit(f64::INFINITY));
    }
    let x = svd.solve(&y, 0.0).map_err(|_| Error::IllConditionedFit(f64::INFINITY))?;
    let coef: Vec<f64> = (0..6).map(|j| x[j] / scale[j]).collect();
    let r = &y - &a * &x;
    let residual = (r.norm_squared() / n as f64).sqrt();
    let y_scale = y.amax();
    if !residual.is_finite() || residual > MAX_RELATIVE_RESIDUAL * (1.0 + y_scale) {
        return Err(Error::IllConditionedFit(residual));
    }
    let chi_est = coef[0];
    let n_c_est = -(coef[0] + coef[1]);
    Ok(AsymptoticFit {
        chi_est,
        n_c_est,
        quad_coeffs: [coef[2], coef[3], coef[4]],
        residual,
        chi: round_if_close(chi_est),
        n_c: round_if_close(n_c_est),
    })
}

/// Integer interval of Euler characteristics consistent with zero orders at `-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCharRange {
    /// `None` when no order data constrains χ from below.
    pub lower: Option<i64>,
    pub upper: i64,
}

impl EulerCharRange {
    pub fn is_unbounded(&self) -> bool {
        self.lower.is_none()
    }

    pub fn contains(&self, chi: i64) -> bool {
        chi <= self.upper && self.lower.is_none_or(|l| chi >= l)
    }

    /// The single admissible value, if the range has collapsed to one.
    pub fn unique(&self) -> Option<i64> {
        (self.lower == Some(self.upper)).then_some(self.upper)
    }
}

/// `0 ≥ χ ≥ -ord_{s=-k} Z_X/(2k+1)` for each supplied `(k, order)`.
pub fn euler_char_bounds(orders: &[(u32, i64)]) -> Result<EulerCharRange> {
    let mut lower: Option<i64> = None;
    for &(k, ord) in orders {
        let b = (-(ord as f64) / (2 * k + 1) as f64).ceil() as i64;
        lower = Some(lower.map_or(b, |l| l.max(b)));
    }
    let range = EulerCharRange { lower, upper: 0 };
    match lower {
        Some(l) if l > 0 => Err(Error::EmptyRange),
        _ => Ok(range),
    }
}
