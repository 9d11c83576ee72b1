//! Zeta-type functions: Euler products, model closed forms, the topological
//! factor `Z_∞` and genus-two Hadamard products.
//!
//! Everything is evaluated as a logarithm. Products become sums of
//! `log(1 - e^{-x})` terms, and derivatives of those logarithms are summed
//! term by term, so no function here differentiates numerically.

mod hadamard;
mod infinity;
mod products;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::LengthSpectrum;

pub use hadamard::{
    funnel_cubic_moment, funnel_cubic_tail, funnel_lattice, funnel_resonances, hadamard_funnel,
    hadamard_funnel_log_derivative, hadamard_resonances, hadamard_resonances_log_derivative, hadamard_tail_bound,
};
pub use infinity::{log_zeta_infinity, log_zeta_infinity_derivative, zeta_infinity};
pub use products::{
    cylinder_log_derivative, funnel_log_derivative, log_factor_sum, selberg_log_derivative, zeta_cylinder, zeta_funnel,
    zeta_selberg, zeta_y, zeta_y_log_derivative,
};

/// Truncation controls shared by every product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationPolicy {
    /// Number of `k` factors kept past the point where they start to decay.
    pub k_max: usize,
    pub tail_tol: f64,
    /// Length cutoff used when a spectrum must be enumerated on the fly.
    pub word_l_max: f64,
    /// Radius `R` of the resonance disc kept in Hadamard products.
    pub radius: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { k_max: 100, tail_tol: 1e-6, word_l_max: 8.0, radius: 60.0 }
    }
}

impl TruncationPolicy {
    pub fn new(k_max: usize, tail_tol: f64, word_l_max: f64, radius: f64) -> Result<Self> {
        let p = Self { k_max, tail_tol, word_l_max, radius };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return Err(Error::DomainError("k_max must be at least 1".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol <= 1e-2) {
            return Err(Error::DomainError(format!("tail_tol must lie in (0, 1e-2], got {}", self.tail_tol)));
        }
        if !(self.word_l_max > 0.0) || !(self.radius > 0.0) {
            return Err(Error::DomainError("word_l_max and radius must be positive".into()));
        }
        Ok(())
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }
}

/// A logarithm together with its truncation error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaValue {
    pub log_value: Complex64,
    /// Rigorous bound on the omitted `k` factors (or the Hadamard radius tail).
    pub k_tail: f64,
    /// Heuristic estimate for primitive classes beyond the spectrum cutoff.
    pub l_tail: f64,
}

impl ZetaValue {
    pub fn exact(log_value: Complex64) -> Self {
        Self { log_value, k_tail: 0.0, l_tail: 0.0 }
    }

    pub fn value(&self) -> Complex64 {
        self.log_value.exp()
    }

    pub fn tail_bound(&self) -> f64 {
        self.k_tail + self.l_tail
    }
}

/// Axis-parallel rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = re_min < re_max && im_min < im_max && [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !ok {
            return Err(Error::DomainError(format!(
                "rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}] has empty interior"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.re_min, self.re_max, self.im_min, self.im_max]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceSource {
    ClosedForm,
    Located,
    Loaded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonancePoint {
    pub position: Complex64,
    pub multiplicity: u32,
}

/// Finite piece of a resonance set, with multiplicities, inside a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSet {
    pub points: Vec<ResonancePoint>,
    #[serde(rename = "box")]
    pub region: Rect,
    pub source: ResonanceSource,
    /// Outward box perturbation applied by the locator, if any.
    #[serde(default)]
    pub jitter: f64,
}

/// Points closer than this are treated as one.
pub const DISTINCT_TOL: f64 = 1e-9;

impl ResonanceSet {
    /// Checks multiplicities, distinctness and containment, then sorts by (Re, Im).
    pub fn new(mut points: Vec<ResonancePoint>, region: Rect, source: ResonanceSource) -> Result<Self> {
        for p in &points {
            if p.multiplicity == 0 {
                return Err(Error::DomainError(format!("zero multiplicity at {}", p.position)));
            }
            if !region.contains(p.position, 1e-12 * (1.0 + p.position.norm())) {
                return Err(Error::DomainError(format!("point {} outside the box", p.position)));
            }
        }
        sort_points(&mut points);
        for w in points.windows(2) {
            if (w[0].position - w[1].position).norm() < DISTINCT_TOL {
                return Err(Error::DomainError(format!("duplicate point near {}", w[0].position)));
            }
        }
        Ok(Self { points, region, source, jitter: 0.0 })
    }

    pub fn empty(region: Rect, source: ResonanceSource) -> Self {
        Self { points: Vec::new(), region, source, jitter: 0.0 }
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|p| p.multiplicity as u64).sum()
    }

    /// Points with `|ζ| ≤ radius`.
    pub fn within_radius(&self, radius: f64) -> Vec<ResonancePoint> {
        self.points.iter().copied().filter(|p| p.position.norm() <= radius).collect()
    }
}

pub(crate) fn sort_points(points: &mut [ResonancePoint]) {
    points
        .sort_by(|a, b| a.position.re.total_cmp(&b.position.re).then_with(|| a.position.im.total_cmp(&b.position.im)));
}

/// A function known through its logarithm and the first three derivatives of it.
///
/// Zero counting only needs `log_derivative(1, ·)`; the other orders feed the
/// determinant and scattering identities.
pub trait Meromorphic: Send + Sync {
    fn log_value(&self, s: Complex64) -> Result<Complex64>;
    /// `d^order/ds^order log f(s)` for `order` in `1..=3`.
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64>;
}

fn check_order(order: u32) -> Result<()> {
    if (1..=3).contains(&order) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("log-derivative of order {order}")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CylinderZeta {
    pub length: f64,
    pub policy: TruncationPolicy,
}

impl Meromorphic for CylinderZeta {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        Ok(zeta_cylinder(s, self.length, &self.policy)?.log_value)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        cylinder_log_derivative(order, s, self.length, &self.policy)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FunnelZeta {
    pub length: f64,
    pub policy: TruncationPolicy,
}

impl Meromorphic for FunnelZeta {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        Ok(zeta_funnel(s, self.length, &self.policy)?.log_value)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        funnel_log_derivative(order, s, self.length, &self.policy)
    }
}

#[derive(Debug, Clone)]
pub struct SelbergZeta {
    pub spectrum: LengthSpectrum,
    pub policy: TruncationPolicy,
}

impl Meromorphic for SelbergZeta {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        Ok(zeta_selberg(s, &self.spectrum, &self.policy)?.log_value)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        selberg_log_derivative(order, s, &self.spectrum, &self.policy)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InfinityZeta {
    pub chi: i64,
}

impl Meromorphic for InfinityZeta {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        log_zeta_infinity(s, self.chi)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        log_zeta_infinity_derivative(order, s, self.chi)
    }
}

/// `P(s) = s^{m₀} Π (1 - s/ζ)^{m} e^{m(s/ζ + s²/2ζ²)}` over a finite point list.
#[derive(Debug, Clone)]
pub struct HadamardProduct {
    pub points: Vec<ResonancePoint>,
}

impl Meromorphic for HadamardProduct {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        Ok(hadamard_resonances(s, &self.points))
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        hadamard_resonances_log_derivative(order, s, &self.points)
    }
}

/// Adapter for closures: `log f` and its derivatives.
pub struct FnHandle<F, G> {
    pub log_value: F,
    pub log_derivative: G,
}

impl<F, G> Meromorphic for FnHandle<F, G>
where
    F: Fn(Complex64) -> Result<Complex64> + Send + Sync,
    G: Fn(u32, Complex64) -> Result<Complex64> + Send + Sync,
{
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        (self.log_value)(s)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        (self.log_derivative)(order, s)
    }
}

impl<T: Meromorphic + ?Sized> Meromorphic for &T {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        (**self).log_value(s)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        (**self).log_derivative(order, s)
    }
}

impl<T: Meromorphic + ?Sized> Meromorphic for Box<T> {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        (**self).log_value(s)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        (**self).log_derivative(order, s)
    }
}
