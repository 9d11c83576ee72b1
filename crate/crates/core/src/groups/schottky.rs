//! Ping-pong certificates for Schottky groups via Dirichlet sides.
//!
//! For a basepoint `p` and each letter `x` (a generator or its inverse) the
//! bisector of `p` and `x(p)` cuts off an ideal arc `D_x` of the boundary
//! circle seen from `p`. Pairwise disjoint arcs certify that the generators
//! play ping-pong, so the group is free and discrete, and the exterior of all
//! arcs is a fundamental domain.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{geodesic_distance, BoundaryPoint, GeodesicLine, HalfPlanePoint, MapClass, MobiusMap};

/// Letter index: `2i` is generator `i`, `2i + 1` its inverse.
pub type Letter = usize;

pub fn inverse_letter(x: Letter) -> Letter {
    x ^ 1
}

/// Signed, one-based generator label used in serialized words.
pub fn signed_label(x: Letter) -> i32 {
    let g = (x / 2) as i32 + 1;
    if x.is_multiple_of(2) {
        g
    } else {
        -g
    }
}

pub fn letter_matrix(generators: &[MobiusMap], x: Letter) -> MobiusMap {
    let g = generators[x / 2];
    if x.is_multiple_of(2) {
        g
    } else {
        g.inverse()
    }
}

/// Arc of the boundary circle, as `center ± half_width` in angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealArc {
    pub center: f64,
    pub half_width: f64,
}

impl IdealArc {
    pub fn start(&self) -> f64 {
        (self.center - self.half_width).rem_euclid(TAU)
    }
    pub fn end(&self) -> f64 {
        (self.center + self.half_width).rem_euclid(TAU)
    }
}

/// Everything needed to re-check the ping-pong condition and the pruning bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub basepoint: (f64, f64),
    pub arcs: Vec<IdealArc>,
    /// Smallest angular gap between consecutive arcs.
    pub angular_margin: f64,
    /// `side_distance[x][y]`: hyperbolic distance between the sides of `D_x` and `D_y`.
    pub side_distance: Vec<Vec<f64>>,
}

fn to_disk(p: HalfPlanePoint, z: HalfPlanePoint) -> Complex64 {
    let z = Complex64::new(z.x, z.y);
    let p = Complex64::new(p.x, p.y);
    (z - p) / (z - p.conj())
}

fn from_circle(p: HalfPlanePoint, angle: f64) -> BoundaryPoint {
    // z = (p - ζ p̄)/(1 - ζ)
    let zeta = Complex64::from_polar(1.0, angle);
    let pc = Complex64::new(p.x, p.y);
    let den = 1.0 - zeta;
    if den.norm() < 1e-300 {
        return BoundaryPoint::Infinity;
    }
    let z = (pc - zeta * pc.conj()) / den;
    BoundaryPoint::Finite(z.re)
}

fn side_line(p: HalfPlanePoint, arc: &IdealArc) -> Result<GeodesicLine> {
    GeodesicLine::through(from_circle(p, arc.start()), from_circle(p, arc.end()))
}

fn arcs_for(generators: &[MobiusMap], p: HalfPlanePoint) -> Vec<IdealArc> {
    (0..2 * generators.len())
        .map(|x| {
            let z = letter_matrix(generators, x).apply(p);
            let w = to_disk(p, z);
            // sin of the half-width is sqrt(1 - |w|²) = 2 sqrt(y_z y_p)/|z - p̄|
            let sin = 2.0 * (z.y * p.y).sqrt() / (z.x - p.x).hypot(z.y + p.y);
            IdealArc { center: w.arg(), half_width: sin.atan2(w.norm()) }
        })
        .collect()
}

/// Arcs sorted counter-clockwise by start angle, with the angular gap after each.
pub(crate) fn cyclic_order(arcs: &[IdealArc]) -> (Vec<Letter>, Vec<f64>) {
    let mut order: Vec<Letter> = (0..arcs.len()).collect();
    order.sort_by(|&a, &b| arcs[a].start().total_cmp(&arcs[b].start()));
    let mut gaps = Vec::with_capacity(order.len());
    for (i, &x) in order.iter().enumerate() {
        let y = order[(i + 1) % order.len()];
        let end_x = arcs[x].start() + 2.0 * arcs[x].half_width;
        let mut gap = arcs[y].start() - end_x;
        if i + 1 == order.len() {
            gap += TAU;
        }
        gaps.push(gap);
    }
    (order, gaps)
}

fn margin(arcs: &[IdealArc]) -> f64 {
    if arcs.iter().any(|a| a.half_width >= PI / 2.0 - 1e-15 || !a.half_width.is_finite()) {
        return f64::NEG_INFINITY;
    }
    let (_, gaps) = cyclic_order(arcs);
    gaps.into_iter().fold(f64::INFINITY, f64::min)
}

fn side_distances(p: HalfPlanePoint, arcs: &[IdealArc]) -> Result<Vec<Vec<f64>>> {
    let lines: Vec<GeodesicLine> = arcs.iter().map(|a| side_line(p, a)).collect::<Result<_>>()?;
    let n = lines.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = geodesic_distance(&lines[i], &lines[j])?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    Ok(d)
}

fn min_offdiag(d: &[Vec<f64>]) -> f64 {
    let mut m = f64::INFINITY;
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                m = m.min(*v);
            }
        }
    }
    m
}

fn score(generators: &[MobiusMap], p: HalfPlanePoint) -> Option<(f64, Vec<IdealArc>, Vec<Vec<f64>>)> {
    let arcs = arcs_for(generators, p);
    if margin(&arcs) <= 1e-9 {
        return None;
    }
    let d = side_distances(p, &arcs).ok()?;
    Some((min_offdiag(&d), arcs, d))
}

/// Grid search over a window spanned by the fixed points, then pattern search.
fn search_basepoint(generators: &[MobiusMap]) -> Option<HalfPlanePoint> {
    let mut xs: Vec<f64> = Vec::new();
    for g in generators {
        if let Ok((a, b)) = g.fixed_points() {
            for q in [a, b] {
                if let BoundaryPoint::Finite(x) = q {
                    xs.push(x);
                }
            }
        }
    }
    let (lo, hi) = xs.iter().fold((0.0f64, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    let span = (hi - lo).max(1.0);
    let mid = 0.5 * (lo + hi);

    let mut best: Option<(f64, HalfPlanePoint)> = None;
    let nx = 25;
    let ny = 25;
    for i in 0..nx {
        for j in 0..ny {
            let x = mid + span * (i as f64 / (nx - 1) as f64 - 0.5) * 1.5;
            let y = span * 10f64.powf(-2.0 + 3.0 * j as f64 / (ny - 1) as f64);
            let p = HalfPlanePoint { x, y };
            if let Some((sc, _, _)) = score(generators, p) {
                if best.is_none_or(|(b, _)| sc > b) {
                    best = Some((sc, p));
                }
            }
        }
    }
    let (mut best_score, mut bp) = best?;
    let mut step = (0.25 * span, 0.5f64);
    for _ in 0..60 {
        let mut improved = false;
        for (dx, dly) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let cand = HalfPlanePoint { x: bp.x + dx * step.0, y: bp.y * (dly * step.1).exp() };
            if let Some((sc, _, _)) = score(generators, cand) {
                if sc > best_score + 1e-14 {
                    best_score = sc;
                    bp = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step = (step.0 * 0.5, step.1 * 0.5);
            if step.1 < 1e-6 {
                break;
            }
        }
    }
    Some(bp)
}

fn finite_pair(g: &MobiusMap) -> Option<(f64, f64)> {
    match g.fixed_points().ok()? {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => Some((u, v)),
        _ => None,
    }
}

/// Map taking the common perpendicular of the first two axes to the imaginary
/// axis, with the two axes becoming semicircles of reciprocal radii.
fn normalizing_map(generators: &[MobiusMap]) -> Option<MobiusMap> {
    let (a1, a2) = finite_pair(generators.first()?)?;
    let (b1, b2) = finite_pair(generators.get(1)?)?;
    let (sa, pa, sb, pb) = (a1 + a2, a1 * a2, b1 + b2, b1 * b2);
    if (sa - sb).abs() < 1e-12 * (1.0 + sa.abs()) {
        // perpendicular is the vertical line through the common midpoint
        let x0 = 0.5 * sa;
        let k = 1.0 / ((0.5 * (a1 - a2)).abs() * (0.5 * (b1 - b2)).abs()).sqrt();
        return MobiusMap::new(k.sqrt(), -x0 * k.sqrt(), 0.0, 1.0 / k.sqrt()).ok();
    }
    // endpoints {p, q} harmonic with both pairs: p + q = σ, pq = π
    let sigma = 2.0 * (pa - pb) / (sa - sb);
    let pi = 0.5 * sigma * sa - pa;
    let disc = 0.25 * sigma * sigma - pi;
    if !(disc > 0.0) {
        return None;
    }
    let (lo, hi) = (0.5 * sigma - disc.sqrt(), 0.5 * sigma + disc.sqrt());
    let base = |z: f64| ((z - hi) / (z - lo)).abs();
    let scale = 1.0 / (base(a1) * base(b1)).sqrt();
    if !scale.is_finite() {
        return None;
    }
    // z ↦ scale (z - hi)/(z - lo), determinant scale (hi - lo) > 0
    let n = (scale * (hi - lo)).sqrt();
    MobiusMap::new(scale / n, -scale * hi / n, 1.0 / n, -lo / n).ok()
}

/// Searches for a basepoint with disjoint arcs, maximizing the smallest side distance.
///
/// The search runs first in the given coordinates and then, if that fails, in
/// a normalized frame whose result is mapped back.
pub fn certify(generators: &[MobiusMap]) -> Result<PingPongCertificate> {
    if generators.is_empty() {
        return Err(Error::ConstructionFailed("no generators".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if g.classify() != MapClass::Hyperbolic {
            return Err(Error::ConstructionFailed(format!("generator {} is not hyperbolic", i + 1)));
        }
    }
    let direct = search_basepoint(generators).and_then(|p| score(generators, p).map(|s| (p, s)));
    let found = direct.or_else(|| {
        let h = normalizing_map(generators)?;
        let normalized: Vec<MobiusMap> = generators.iter().map(|g| g.conjugate_by(&h)).collect();
        let q = search_basepoint(&normalized)?;
        let p = h.inverse().apply(q);
        score(generators, p).map(|s| (p, s))
    });
    let (bp, (_, arcs, side_distance)) = found.ok_or_else(|| {
        Error::ConstructionFailed("no basepoint found with disjoint Dirichlet arcs (ping-pong failed)".into())
    })?;
    Ok(PingPongCertificate { basepoint: (bp.x, bp.y), angular_margin: margin(&arcs), arcs, side_distance })
}

/// Boundary components of the quotient: follows the gluing of gaps between arcs.
///
/// Returns, per component, the word (as letters applied in order) and its
/// translation length.
pub fn boundary_cycles(generators: &[MobiusMap], cert: &PingPongCertificate) -> Result<Vec<(Vec<Letter>, f64)>> {
    let (order, _) = cyclic_order(&cert.arcs);
    let m = order.len();
    let position: Vec<usize> = {
        let mut pos = vec![0; m];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    };
    let p = HalfPlanePoint { x: cert.basepoint.0, y: cert.basepoint.1 };
    // the gap after arc order[i] ends at the start of arc order[i+1]
    let mut visited = vec![false; m];
    let mut cycles = Vec::new();
    for start in 0..m {
        if visited[start] {
            continue;
        }
        let mut gap = start;
        let mut word = Vec::new();
        let mut product = MobiusMap::identity();
        while !visited[gap] {
            visited[gap] = true;
            let x = order[(gap + 1) % m];
            let xi = inverse_letter(x);
            // x^{-1} sends the start of D_x to the end of D_{x^{-1}}
            let mx = letter_matrix(generators, xi);
            let img = mx.apply_boundary(from_circle(p, cert.arcs[x].start()));
            let target = from_circle(p, cert.arcs[xi].end());
            if !boundary_close(img, target) {
                return Err(Error::ConstructionFailed(format!(
                    "side pairing does not match arc endpoints ({img} vs {target})"
                )));
            }
            word.push(xi);
            product = mx * product;
            gap = position[xi];
        }
        let length = product.translation_length()?;
        cycles.push((word, length));
    }
    Ok(cycles)
}

fn boundary_close(a: BoundaryPoint, b: BoundaryPoint) -> bool {
    match (a, b) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => (x - y).abs() <= 1e-7 * (1.0 + x.abs().max(y.abs())),
        (BoundaryPoint::Finite(x), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => {
            x.abs() > 1e8
        }
    }
}
