use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Rect, ResonancePoint, ResonanceSet, ResonanceSource, TruncationPolicy, ZetaValue};
use crate::error::{Error, Result};
use crate::special::gamma::ln_1p;

/// `log(1 - u) + u + u²/2`, summed as `-Σ_{n≥3} uⁿ/n` when `|u|` is small.
fn genus_two_log(u: Complex64) -> Complex64 {
    if u.norm() < 0.25 {
        let mut p = u * u * u;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 3..60 {
            let t = p / n as f64;
            acc -= t;
            if t.norm() < 1e-18 * acc.norm() {
                break;
            }
            p *= u;
        }
        acc
    } else {
        ln_1p(-u) + u + 0.5 * u * u
    }
}

/// Order-th `s`-derivative of one genus-two factor's logarithm.
fn factor_derivative(order: u32, s: Complex64, zeta: Complex64) -> Complex64 {
    let d = s - zeta;
    match order {
        1 => s * s / (zeta * zeta * d),
        2 => s * (s - 2.0 * zeta) / (zeta * zeta * d * d),
        _ => 2.0 / (d * d * d),
    }
}

/// Points closer than this to the origin enter through the `s^{m₀}` factor.
pub const ORIGIN_SNAP: f64 = 1e-9;

fn at_origin(z: Complex64) -> bool {
    z.norm() <= ORIGIN_SNAP
}

/// `log P(s)` for `P(s) = s^{m₀} Π (1 - s/ζ)^{m} e^{m(s/ζ + s²/2ζ²)}`.
///
/// A located zero within `ORIGIN_SNAP` of `0` counts towards `m₀`.
pub fn hadamard_resonances(s: Complex64, points: &[ResonancePoint]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in points {
        let m = p.multiplicity as f64;
        if at_origin(p.position) {
            acc += m * s.ln();
        } else {
            acc += m * genus_two_log(s / p.position);
        }
    }
    acc
}

pub fn hadamard_resonances_log_derivative(order: u32, s: Complex64, points: &[ResonancePoint]) -> Result<Complex64> {
    if !(1..=3).contains(&order) {
        return Err(Error::Unsupported(format!("log-derivative of order {order}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for p in points {
        if s == p.position {
            return Err(Error::AtZero(s));
        }
        let m = p.multiplicity as f64;
        acc += m * if at_origin(p.position) {
            match order {
                1 => s.inv(),
                2 => -(s * s).inv(),
                _ => 2.0 * (s * s * s).inv(),
            }
        } else {
            factor_derivative(order, s, p.position)
        };
    }
    Ok(acc)
}

/// Estimate of `Σ_{|ζ|>R} m|s/ζ|³/(3(1-|s|/R))` for points of (multiplicity-weighted)
/// area density `density` spread over a half-plane.
pub fn hadamard_tail_bound(s: Complex64, radius: f64, density: f64) -> f64 {
    let r = s.norm();
    if r >= radius {
        return f64::INFINITY;
    }
    density * PI * r.powi(3) / (3.0 * radius * (1.0 - r / radius))
}

/// The lattice `ζ_{k,m} = -(2k+1) + 2πim/ℓ` inside `|ζ| ≤ radius`, multiplicity 2.
pub fn funnel_lattice(ell: f64, radius: f64) -> Vec<ResonancePoint> {
    let step = 2.0 * PI / ell;
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let re = -(2.0 * k as f64 + 1.0);
        if -re > radius {
            break;
        }
        let h = (radius * radius - re * re).max(0.0).sqrt();
        let m_max = (h / step).floor() as i64;
        for m in -m_max..=m_max {
            out.push(ResonancePoint { position: Complex64::new(re, step * m as f64), multiplicity: 2 });
        }
        k += 1;
    }
    out
}

/// All lattice points `ζ_{k,m}` inside `region`, each with multiplicity 2.
pub fn funnel_resonances(ell: f64, region: Rect) -> Result<ResonanceSet> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::NonPositiveLength(ell));
    }
    let step = 2.0 * PI / ell;
    let mut points = Vec::new();
    let m_lo = (region.im_min / step).ceil() as i64;
    let m_hi = (region.im_max / step).floor() as i64;
    let mut k = 0u64;
    loop {
        let re = -(2.0 * k as f64 + 1.0);
        if re < region.re_min {
            break;
        }
        if re <= region.re_max {
            for m in m_lo..=m_hi {
                points.push(ResonancePoint { position: Complex64::new(re, step * m as f64), multiplicity: 2 });
            }
        }
        k += 1;
    }
    ResonanceSet::new(points, region, ResonanceSource::ClosedForm)
}

/// Funnel Hadamard product `P_F` truncated to `|ζ| ≤ policy.radius`.
///
/// The radius tail is reported in `k_tail`; `TailTooLarge` is raised only when
/// `|s| ≥ R`, where no bound exists.
pub fn hadamard_funnel(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<ZetaValue> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::NonPositiveLength(ell));
    }
    let points = funnel_lattice(ell, policy.radius);
    let log_value = hadamard_resonances(s, &points);
    let tail = hadamard_tail_bound(s, policy.radius, ell / (2.0 * PI));
    if !tail.is_finite() {
        return Err(Error::TailTooLarge { value: log_value.exp(), tail, tol: policy.tail_tol });
    }
    Ok(ZetaValue { log_value, k_tail: tail, l_tail: 0.0 })
}

pub fn hadamard_funnel_log_derivative(
    order: u32,
    s: Complex64,
    ell: f64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    hadamard_resonances_log_derivative(order, s, &funnel_lattice(ell, policy.radius))
}

/// `Σ_m ζ_{k,m}^{-3} = -(ℓ³/8) coth(y)/sinh²(y)` with `y = (2k+1)ℓ/2`, summed over `k`
/// and doubled for multiplicity.
pub fn funnel_cubic_moment(ell: f64) -> f64 {
    let mut total = 0.0;
    for k in 0..1_000_000u64 {
        let y = (2.0 * k as f64 + 1.0) * ell / 2.0;
        let sh = y.sinh();
        let t = -(ell.powi(3) / 8.0) / (y.tanh() * sh * sh);
        total += t;
        if t.abs() < 1e-18 * total.abs() {
            break;
        }
    }
    2.0 * total
}

/// Leading correction `log P_F - log P_F^{(R)} ≈ -(s³/3) Σ_{|ζ|>R} m ζ^{-3}`.
pub fn funnel_cubic_tail(s: Complex64, ell: f64, radius: f64) -> Complex64 {
    let inside: Complex64 =
        funnel_lattice(ell, radius).iter().map(|p| p.multiplicity as f64 * p.position.powi(-3)).sum();
    let tail = Complex64::new(funnel_cubic_moment(ell), 0.0) - inside;
    -(s * s * s) / 3.0 * tail
}
