use std::f64::consts::PI;

use num_complex::Complex64;

use super::horn::{phi_horn, upsilon_horn};
use crate::error::{Error, Result};
use crate::groups::SurfaceModel;
use crate::special::gamma::cot_pi;
use crate::zeta::{cylinder_log_derivative, funnel_log_derivative, TruncationPolicy};

/// `Φ_M = Z_M'/Z_M`, summed term by term.
pub fn phi_cylinder(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    cylinder_log_derivative(1, s, ell, policy)
}

/// `Φ_F = Z_F'/Z_F = -ℓ/4 + Σ_{k≥0} 2ℓ e^{-(s+2k+1)ℓ}/(1 - e^{-(s+2k+1)ℓ})`.
pub fn phi_funnel(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    funnel_log_derivative(1, s, ell, policy)
}

/// `Υ_F(s) = d/ds log(Z_F(s)/Z_F(1-s))`.
pub fn upsilon_funnel(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(phi_funnel(s, ell, policy)? + phi_funnel(1.0 - s, ell, policy)?)
}

/// `Υ_M(s)` as one combined series `Σ_k 2ℓ[1/(e^{(s+k)ℓ}-1) + 1/(e^{(1-s+k)ℓ}-1)]`.
pub fn upsilon_cylinder(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    let term = |x: Complex64| -> Complex64 {
        if x.re > 0.0 {
            let w = (-x).exp();
            w / (1.0 - w)
        } else {
            (x.exp() - 1.0).inv()
        }
    };
    let start = (-(s.re.min(1.0 - s.re))).max(0.0).ceil() as usize;
    let n = start + policy.k_max.max(20) + (40.0 / ell).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        acc += term((s + kf) * ell) + term((1.0 - s + kf) * ell);
    }
    let v = 2.0 * ell * acc;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::AtZero(s))
    }
}

/// `Φ(s) + Φ(1-s) - Υ(s) - (2s-1)πχ cot(πs)` for the elementary models (χ = 0).
pub fn phi_ups_relation_residual(s: Complex64, model: &SurfaceModel, policy: &TruncationPolicy) -> Result<Complex64> {
    let chi = model.topology().chi as f64;
    let correction = (2.0 * s - 1.0) * PI * chi * cot_pi(s);
    let r = match model {
        SurfaceModel::Horn => phi_horn(s)? + phi_horn(1.0 - s)? - upsilon_horn(s)?,
        SurfaceModel::Funnel { length } => {
            phi_funnel(s, *length, policy)? + phi_funnel(1.0 - s, *length, policy)?
                - upsilon_funnel(s, *length, policy)?
        }
        SurfaceModel::Cylinder { length } => {
            phi_cylinder(s, *length, policy)? + phi_cylinder(1.0 - s, *length, policy)?
                - upsilon_cylinder(s, *length, policy)?
        }
        SurfaceModel::Schottky(_) => {
            return Err(Error::Unsupported("Φ(1-s) needs a continuation of the Euler product past its abscissa".into()))
        }
    };
    Ok(r - correction)
}

/// Funnel trace as a sum over the hyperbolic images `m ≠ 0`:
/// `Σ_{m≠0} (ℓ/2) e^{-s|m|ℓ} [1/(1 - e^{-|m|ℓ}) - 1/(1 + e^{-|m|ℓ})]`.
///
/// Converges for `Re s > -1`; equals `Φ_F(s) + ℓ/4`.
pub fn funnel_per_image_sum(s: Complex64, ell: f64, tol: f64) -> Result<Complex64> {
    if !(s.re > -1.0) {
        return Err(Error::DomainError(format!("image sum needs Re s > -1, got {s}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..10_000_000u64 {
        let q = (-(m as f64) * ell).exp();
        // 1/(1 - q) - 1/(1 + q) without cancellation
        let bracket = 2.0 * q / (1.0 - q * q);
        let t = 0.5 * ell * (-s * (m as f64) * ell).exp() * bracket;
        // both signs of m contribute equally
        acc += 2.0 * t;
        if t.norm() < tol * 1e-3 && m > 2 {
            return Ok(acc);
        }
    }
    Err(Error::BudgetExceeded { estimate: acc, error: f64::NAN })
}

/// `Φ_F(s) + ℓ/4 - funnel_per_image_sum(s)`.
pub fn funnel_per_image_residual(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(phi_funnel(s, ell, policy)? + ell / 4.0 - funnel_per_image_sum(s, ell, 1e-16)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{zeta_cylinder, zeta_funnel};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn cylinder_phi_at_two() {
        let mut direct = 0.0;
        for k in 0..=40 {
            let w = (-(2.0 + k as f64)).exp();
            direct += 2.0 * w / (1.0 - w);
        }
        let v = phi_cylinder(c(2.0, 0.0), 1.0, &pol()).unwrap();
        assert!((v.re - direct).abs() < 1e-15);
        assert!((v.re - 0.476_565_6).abs() < 1e-7);
        assert!(phi_cylinder(c(50.0, 0.0), 1.0, &pol()).unwrap().norm() < 1e-20);
        let h = 1e-5;
        let s = c(0.7, 0.9);
        let f = |z| zeta_cylinder(z, 1.0, &pol()).unwrap().log_value;
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        assert!((fd - phi_cylinder(s, 1.0, &pol()).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn funnel_phi_examples() {
        let p = pol();
        assert!((phi_funnel(c(60.0, 0.0), 2.0, &p).unwrap() + 0.5).norm() < 1e-20);
        let s = c(1.0, 0.0);
        let h = 1e-5;
        let f = |z| zeta_funnel(z, 2.0, &p).unwrap().log_value;
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        assert!((fd - phi_funnel(s, 2.0, &p).unwrap()).norm() < 1e-8);
        let s = c(0.3, -0.8);
        let r = upsilon_funnel(s, 2.0, &p).unwrap()
            - phi_funnel(s, 2.0, &p).unwrap()
            - phi_funnel(1.0 - s, 2.0, &p).unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn relation_residuals() {
        let p = pol();
        let h = phi_ups_relation_residual(c(1.0, 0.0), &SurfaceModel::Horn, &p).unwrap();
        assert!(h.norm() < 1e-12);
        let f = phi_ups_relation_residual(c(0.8, 2.0), &SurfaceModel::funnel(2.0).unwrap(), &p).unwrap();
        assert!(f.norm() < 1e-10);
        let m = phi_ups_relation_residual(c(0.75, 0.0), &SurfaceModel::cylinder(1.0).unwrap(), &p).unwrap();
        assert!(m.norm() < 1e-10, "{m}");
        let m = phi_ups_relation_residual(c(-1.7, 3.1), &SurfaceModel::cylinder(0.6).unwrap(), &p).unwrap();
        assert!(m.norm() < 1e-10, "{m}");
    }

    #[test]
    fn per_image_resummation() {
        let p = pol();
        for (s, ell) in [(c(1.0, 0.0), 2.0), (c(0.3, 4.0), 1.0), (c(-0.5, 0.2), 3.0)] {
            let r = funnel_per_image_residual(s, ell, &p).unwrap();
            assert!(r.norm() < 1e-10, "{s} ℓ={ell}: {r}");
        }
        // direct double sum over (m, k) of the geometric expansion
        let (s, ell) = (c(0.6, 1.0), 1.5);
        let mut direct = c(0.0, 0.0);
        for k in 0..200 {
            for m in 1..400 {
                direct += 2.0 * ell * (-(m as f64) * (s + 2.0 * k as f64 + 1.0) * ell).exp();
            }
        }
        let v = funnel_per_image_sum(s, ell, 1e-16).unwrap();
        assert!((v - direct).norm() < 1e-10);
        assert!(funnel_per_image_sum(c(-1.5, 0.0), 1.0, 1e-16).is_err());
    }
}
