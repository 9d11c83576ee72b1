use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::SurfaceModel;
use crate::zeta::{ResonanceSet, TruncationPolicy};

/// Normalized Gaussian `g(t) = e^{-(t-t₀)²/2w²}/(w√(2π))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTest {
    pub center: f64,
    pub width: f64,
}

impl GaussianTest {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && center > 5.0 * width) {
            return Err(Error::DomainError(format!(
                "test function must sit in t > 0: need t₀ > 5w > 0, got t₀ = {center}, w = {width}"
            )));
        }
        Ok(GaussianTest { center, width })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        (-0.5 * x * x).exp() / (self.width * (2.0 * PI).sqrt())
    }

    /// `∫ e^{at} g(t) dt = e^{a t₀ + a²w²/2}`.
    pub fn laplace_pairing(&self, a: Complex64) -> Complex64 {
        (a * self.center + 0.5 * a * a * self.width * self.width).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveTrace {
    pub resonance_side: f64,
    pub geodesic_side: f64,
    pub residual: f64,
}

/// Pairs `Σ_ζ m_ζ e^{(ζ-1/2)t}` over resonances with `|ζ| ≤ policy.radius`
/// and the geodesic side `Σ_k ℓ/sinh(kℓ/2) δ(t - kℓ)` with a Gaussian.
///
/// Only the cylinder is supported: its resonance set is known exhaustively,
/// and its topological terms vanish.
pub fn wave_trace(
    model: &SurfaceModel,
    resonances: &ResonanceSet,
    test: &GaussianTest,
    policy: &TruncationPolicy,
) -> Result<WaveTrace> {
    let ell = match model {
        SurfaceModel::Cylinder { length } => *length,
        _ => return Err(Error::Unsupported("wave trace is implemented for the cylinder only".into())),
    };
    let test = GaussianTest::new(test.center, test.width)?;
    let mut res = Complex64::new(0.0, 0.0);
    for p in resonances.within_radius(policy.radius) {
        res += p.multiplicity as f64 * test.laplace_pairing(p.position - 0.5);
    }
    let mut geo = 0.0;
    let k_max = ((test.center + 40.0 * test.width) / ell).ceil() as u64;
    for k in 1..=k_max.max(1) {
        let t = k as f64 * ell;
        geo += ell / (0.5 * t).sinh() * test.eval(t);
    }
    Ok(WaveTrace { resonance_side: res.re, geodesic_side: geo, residual: (res - geo).norm() })
}

/// `|resonance side - geodesic side|` of [`wave_trace`].
pub fn wave_trace_residual(
    model: &SurfaceModel,
    resonances: &ResonanceSet,
    test: &GaussianTest,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(wave_trace(model, resonances, test, policy)?.residual)
}
