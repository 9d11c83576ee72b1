//! Upper half-plane geometry: Möbius maps, distances and geodesic lines.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|tr| - 2` when separating parabolic from elliptic/hyperbolic.
pub const TRACE_TIE_TOL: f64 = 1e-10;

/// A real unit-determinant 2×2 matrix acting by `z ↦ (az + b)/(cz + d)`.
///
/// Matrices are identified with their negatives. The stored entries keep the
/// sign produced by construction so products in SL(2,R) are exact; use
/// [`MobiusMap::canonical`] for the representative with non-negative trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl MobiusMap {
    /// Builds a map from entries, rescaling so that `ad - bc = 1`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::DomainError(format!("matrix determinant must be positive, got {det}")));
        }
        let r = det.sqrt();
        Ok(Self { a: a / r, b: b / r, c: c / r, d: d / r })
    }

    pub const fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// The dilation `z ↦ e^ℓ z`, translation length `ℓ`.
    pub fn dilation(length: f64) -> Self {
        let h = (length / 2.0).exp();
        Self { a: h, b: 0.0, c: 0.0, d: 1.0 / h }
    }

    /// The parabolic translation `z ↦ z + t`.
    pub fn translation(t: f64) -> Self {
        Self { a: 1.0, b: t, c: 0.0, d: 1.0 }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Representative of `±M` with non-negative trace.
    pub fn canonical(&self) -> Self {
        if self.trace() < 0.0 {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            *self
        }
    }

    /// `g m g⁻¹`.
    pub fn conjugate_by(&self, g: &MobiusMap) -> Self {
        *g * *self * g.inverse()
    }

    pub fn classify(&self) -> MapClass {
        let t = self.trace().abs();
        if (t - 2.0).abs() <= TRACE_TIE_TOL {
            let m = self.canonical();
            let off = m.b.abs().max(m.c.abs()).max((m.a - 1.0).abs()).max((m.d - 1.0).abs());
            if off <= TRACE_TIE_TOL {
                MapClass::Identity
            } else {
                MapClass::Parabolic
            }
        } else if t > 2.0 {
            MapClass::Hyperbolic
        } else {
            MapClass::Elliptic
        }
    }

    /// Hyperbolic translation length `ℓ` with `|tr| = 2 cosh(ℓ/2)`.
    pub fn translation_length(&self) -> Result<f64> {
        match self.classify() {
            MapClass::Hyperbolic => Ok(length_from_trace(self.trace())),
            _ => Err(Error::NotHyperbolic { trace: self.trace().abs() }),
        }
    }

    pub fn apply(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        // (az+b)/(cz+d) written out in real arithmetic
        let (x, y) = (z.x, z.y);
        let nr = self.a * x + self.b;
        let ni = self.a * y;
        let dr = self.c * x + self.d;
        let di = self.c * y;
        let den = dr * dr + di * di;
        HalfPlanePoint { x: (nr * dr + ni * di) / den, y: (ni * dr - nr * di) / den }
    }

    /// Action on the ideal boundary `R ∪ {∞}`.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Repelling and attracting fixed points of a hyperbolic map.
    pub fn fixed_points(&self) -> Result<(BoundaryPoint, BoundaryPoint)> {
        let tr = self.trace();
        if self.classify() != MapClass::Hyperbolic {
            return Err(Error::NotHyperbolic { trace: tr.abs() });
        }
        if self.c == 0.0 {
            // z ↦ (a z + b)/d: fixed points b/(d - a) and ∞
            let finite = BoundaryPoint::Finite(self.b / (self.d - self.a));
            return Ok(if self.a.abs() > self.d.abs() {
                (finite, BoundaryPoint::Infinity)
            } else {
                (BoundaryPoint::Infinity, finite)
            });
        }
        let disc = (tr * tr - 4.0).sqrt();
        let x1 = (self.a - self.d + disc) / (2.0 * self.c);
        let x2 = (self.a - self.d - disc) / (2.0 * self.c);
        // the attracting point has |c x + d| > 1
        let attracting_first = (self.c * x1 + self.d).abs() > 1.0;
        let (p1, p2) = (BoundaryPoint::Finite(x1), BoundaryPoint::Finite(x2));
        Ok(if attracting_first { (p2, p1) } else { (p1, p2) })
    }

    /// Axis of a hyperbolic map.
    pub fn axis(&self) -> Result<GeodesicLine> {
        let (r, a) = self.fixed_points()?;
        GeodesicLine::through(r, a)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;

    fn mul(self, o: MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// `2 arccosh(|t|/2)`, evaluated without cancellation near `|t| = 2`.
pub fn length_from_trace(trace: f64) -> f64 {
    let h = trace.abs() / 2.0;
    // arccosh(h) = log(h + sqrt((h-1)(h+1)))
    2.0 * (h + ((h - 1.0) * (h + 1.0)).max(0.0).sqrt()).ln()
}

pub fn trace_from_length(length: f64) -> f64 {
    2.0 * (length / 2.0).cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::DomainError(format!("point ({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }
}

/// `cosh²(d(z,w)/2) = ((x - x')² + (y + y')²) / (4 y y')`.
pub fn sigma(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let dx = z.x - w.x;
    let sy = z.y + w.y;
    (dx * dx + sy * sy) / (4.0 * z.y * w.y)
}

/// Hyperbolic distance between two points.
pub fn distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    2.0 * ((dx * dx + dy * dy) / (4.0 * z.y * w.y)).sqrt().asinh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// A complete geodesic in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeodesicLine {
    Vertical { x0: f64 },
    Semicircle { p: f64, q: f64 },
}

impl GeodesicLine {
    pub fn vertical(x0: f64) -> Self {
        GeodesicLine::Vertical { x0 }
    }

    pub fn semicircle(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) || p == q {
            return Err(Error::DomainError(format!("semicircle endpoints {p}, {q} must be distinct")));
        }
        Ok(GeodesicLine::Semicircle { p: p.min(q), q: p.max(q) })
    }

    pub fn through(u: BoundaryPoint, v: BoundaryPoint) -> Result<Self> {
        match (u, v) {
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => Ok(Self::vertical(x)),
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => Self::semicircle(p, q),
            _ => Err(Error::DomainError("both endpoints at infinity".into())),
        }
    }

    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        match *self {
            GeodesicLine::Vertical { x0 } => (BoundaryPoint::Finite(x0), BoundaryPoint::Infinity),
            GeodesicLine::Semicircle { p, q } => (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)),
        }
    }

    pub fn transform(&self, m: &MobiusMap) -> Result<Self> {
        let (u, v) = self.endpoints();
        Self::through(m.apply_boundary(u), m.apply_boundary(v))
    }

    /// Point of the line at Euclidean parameter `t ∈ (0, 1)`; used by grid searches.
    pub fn point_at(&self, t: f64) -> HalfPlanePoint {
        match *self {
            GeodesicLine::Vertical { x0 } => HalfPlanePoint { x: x0, y: (t / (1.0 - t)).max(f64::MIN_POSITIVE) },
            GeodesicLine::Semicircle { p, q } => {
                let c = 0.5 * (p + q);
                let r = 0.5 * (q - p);
                let th = std::f64::consts::PI * t;
                HalfPlanePoint { x: c - r * th.cos(), y: (r * th.sin()).max(f64::MIN_POSITIVE) }
            }
        }
    }
}

/// Infimum of the hyperbolic distance between two geodesic lines.
///
/// Normalizes `g1` to the imaginary axis with a Möbius map; for a semicircle
/// `(p, q)` on one side of the axis, `cosh d = |p + q| / |q - p|`.
pub fn geodesic_distance(g1: &GeodesicLine, g2: &GeodesicLine) -> Result<f64> {
    let (a1, b1) = g1.endpoints();
    let (a2, b2) = g2.endpoints();
    let scale = [a1, b1, a2, b2]
        .iter()
        .filter_map(|p| match p {
            BoundaryPoint::Finite(x) => Some(x.abs()),
            BoundaryPoint::Infinity => None,
        })
        .fold(1.0_f64, f64::max);
    let same = |u: BoundaryPoint, v: BoundaryPoint| match (u, v) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => (x - y).abs() <= 1e-14 * scale,
        _ => false,
    };
    let shared = [(a1, a2), (a1, b2), (b1, a2), (b1, b2)].into_iter().find(|&(u, v)| same(u, v));
    if let Some((u, _)) = shared {
        let first_equal = same(a1, a2) && same(b1, b2);
        let swapped_equal = same(a1, b2) && same(b1, a2);
        if first_equal || swapped_equal {
            return Ok(0.0);
        }
        return Err(Error::SharedEndpoint(match u {
            BoundaryPoint::Finite(x) => x,
            BoundaryPoint::Infinity => f64::INFINITY,
        }));
    }
    // send a1 → 0, b1 → ∞
    let to_axis = |z: BoundaryPoint| -> f64 {
        match (a1, b1, z) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b), BoundaryPoint::Finite(x)) => (x - a) / (x - b),
            (BoundaryPoint::Finite(_), BoundaryPoint::Finite(_), BoundaryPoint::Infinity) => 1.0,
            (BoundaryPoint::Finite(a), BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => x - a,
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(b), BoundaryPoint::Finite(x)) => -1.0 / (x - b),
            // z = ∞ with one of a1, b1 at ∞ is a shared endpoint, excluded above
            _ => unreachable!("shared endpoint at infinity"),
        }
    };
    let p = to_axis(a2);
    let q = to_axis(b2);
    if p * q <= 0.0 {
        return Ok(0.0);
    }
    let ratio = ((p + q) / (q - p)).abs();
    Ok(ratio.max(1.0).acosh())
}

/// `log coth(ℓ/4)`: lower bound on the distance from a simple closed geodesic
/// of length `ℓ` to any disjoint simple closed geodesic.
pub fn collar_bound(length: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::NonPositiveLength(length));
    }
    let e = (-length / 2.0).exp();
    Ok(e.ln_1p() - (-e).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classify_examples() {
        assert_eq!(MobiusMap::new(E, 0.0, 0.0, 1.0 / E).unwrap().classify(), MapClass::Hyperbolic);
        assert_eq!(MobiusMap::translation(1.0).classify(), MapClass::Parabolic);
        assert_eq!(MobiusMap::new(0.0, 1.0, -1.0, 0.0).unwrap().classify(), MapClass::Elliptic);
        assert_eq!(MobiusMap::identity().classify(), MapClass::Identity);
        let minus_id = MobiusMap { a: -1.0, b: 0.0, c: 0.0, d: -1.0 };
        assert_eq!(minus_id.classify(), MapClass::Identity);
    }

    #[test]
    fn new_normalizes_determinant() {
        let m = MobiusMap::new(2.0, 1.0, 1.0, 3.0).unwrap();
        assert!(close(m.det(), 1.0, 1e-12));
        assert!(MobiusMap::new(1.0, 2.0, 3.0, 4.0).is_err());
    }

    #[test]
    fn translation_length_examples() {
        assert!(close(MobiusMap::dilation(2.0).translation_length().unwrap(), 2.0, 1e-14));
        let t = 2.0 * 0.5f64.cosh();
        assert!(close(t, 2.2552519, 1e-7));
        let m = MobiusMap::new(t, 0.0, 0.0, 1.0 / t).unwrap();
        // a + 1/a = t would be a different element; build one with trace t directly
        let m2 = MobiusMap::new(t / 2.0, 1.0, t * t / 4.0 - 1.0, t / 2.0).unwrap();
        assert!(close(m2.trace(), t, 1e-14));
        assert!(close(m2.translation_length().unwrap(), 1.0, 1e-12));
        assert!(m.translation_length().unwrap() > 0.0);
        assert_eq!(MobiusMap::translation(1.0).translation_length(), Err(Error::NotHyperbolic { trace: 2.0 }));
    }

    #[test]
    fn sigma_examples() {
        let o = HalfPlanePoint::new(0.0, 1.0).unwrap();
        assert!(close(sigma(o, o), 1.0, 1e-15));
        let w = HalfPlanePoint::new(0.0, E * E).unwrap();
        assert!(close(sigma(o, w), 1.0f64.cosh().powi(2), 1e-12));
        assert!(close(sigma(o, w), 2.381098, 1e-6));
        let v = HalfPlanePoint::new(1.0, 1.0).unwrap();
        assert!(close(sigma(o, v), 1.25, 1e-15));
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn geodesic_distance_axis_to_collar_semicircle() {
        let a = 1.0f64.exp();
        let d =
            geodesic_distance(&GeodesicLine::vertical(0.0), &GeodesicLine::semicircle(1.0 / a, a).unwrap()).unwrap();
        assert!(close(d, 0.771_936_8, 1e-7));
        assert!(close(d, collar_bound(2.0).unwrap(), 1e-12));
    }

    #[test]
    fn geodesic_distance_degenerate_cases() {
        let v = GeodesicLine::vertical(0.0);
        assert_eq!(geodesic_distance(&v, &v).unwrap(), 0.0);
        let s = GeodesicLine::semicircle(-1.0, 1.0).unwrap();
        assert_eq!(geodesic_distance(&v, &s).unwrap(), 0.0);
        let touching = GeodesicLine::semicircle(0.0, 2.0).unwrap();
        assert!(matches!(geodesic_distance(&v, &touching), Err(Error::SharedEndpoint(_))));
        let v2 = GeodesicLine::vertical(3.0);
        assert!(matches!(geodesic_distance(&v, &v2), Err(Error::SharedEndpoint(_))));
    }

    #[test]
    fn collar_bound_examples() {
        // coth via tanh as an independent evaluation
        let reference = |l: f64| (1.0 / (l / 4.0).tanh()).ln();
        assert!(close(collar_bound(2.0).unwrap(), reference(2.0), 1e-14));
        assert!(close(collar_bound(2.0).unwrap(), 0.771_936_8, 1e-7));
        assert!(close(collar_bound(4.0).unwrap(), 0.272_341_5, 1e-7));
        let mut prev = f64::INFINITY;
        for l in [0.5, 1.0, 4.0, 10.0, 40.0, 200.0] {
            let b = collar_bound(l).unwrap();
            assert!(b > 0.0 && b < prev);
            prev = b;
        }
        assert_eq!(collar_bound(0.0), Err(Error::NonPositiveLength(0.0)));
        assert_eq!(collar_bound(-1.0), Err(Error::NonPositiveLength(-1.0)));
    }

    #[test]
    fn fixed_points_and_axis() {
        let m = MobiusMap::dilation(1.0);
        let (r, a) = m.fixed_points().unwrap();
        assert_eq!(r, BoundaryPoint::Finite(0.0));
        assert_eq!(a, BoundaryPoint::Infinity);
        let g = MobiusMap::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let c = m.conjugate_by(&g);
        let (r, a) = c.fixed_points().unwrap();
        for p in [r, a] {
            let img = c.apply_boundary(p);
            match (p, img) {
                (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => assert!(close(x, y, 1e-12)),
                _ => panic!("unexpected infinity"),
            }
        }
        match (g.apply_boundary(BoundaryPoint::Finite(0.0)), r) {
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => assert!(close(x, y, 1e-12)),
            other => panic!("{other:?}"),
        }
    }
}
