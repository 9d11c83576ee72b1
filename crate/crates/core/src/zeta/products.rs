use std::f64::consts::PI;

use num_complex::Complex64;

use super::{TruncationPolicy, ZetaValue};
use crate::error::{Error, Result};
use crate::groups::LengthSpectrum;
use crate::special::gamma::ln_1p;

const MAX_TERMS: usize = 1_000_000;

/// Principal `log(1 - e^{-x})`, or one of its `s`-derivatives when `x = (s + c)ℓ`.
fn factor_term(order: u32, x: Complex64, ell: f64) -> Complex64 {
    if x.re > 0.0 {
        let w = (-x).exp();
        match order {
            0 => ln_1p(-w),
            1 => ell * w / (1.0 - w),
            2 => -ell * ell * w / ((1.0 - w) * (1.0 - w)),
            _ => ell.powi(3) * w * (1.0 + w) / (1.0 - w).powi(3),
        }
    } else {
        // 1 - e^{-x} = -e^{-x}(1 - e^{x}), with |e^{x}| ≤ 1
        let u = x.exp();
        match order {
            0 => {
                let z = 1.0 - u;
                let l = ln_1p(-u);
                let branch = if z.im <= 0.0 { PI } else { -PI };
                -x + l + Complex64::new(0.0, branch)
            }
            1 => ell / (u - 1.0),
            2 => -ell * ell * u / ((1.0 - u) * (1.0 - u)),
            _ => -ell.powi(3) * u * (1.0 + u) / (1.0 - u).powi(3),
        }
    }
}

/// `Σ_{j<n} (d/ds)^order log(1 - e^{-(s + offset + stride·j)ℓ})`.
pub fn log_factor_sum(order: u32, s: Complex64, ell: f64, offset: f64, stride: f64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let x = (s + offset + stride * j as f64) * ell;
        acc += factor_term(order, x, ell);
    }
    acc
}

/// Index of the first factor with `|e^{-x}| < 1`.
fn turning_index(s: Complex64, offset: f64, stride: f64) -> usize {
    let t = -(s.re + offset) / stride;
    if t > 0.0 {
        t.floor() as usize + 1
    } else {
        0
    }
}

/// Bound on `Σ_{j≥n}` of the order-th derivative terms.
fn factor_tail(order: u32, s: Complex64, ell: f64, offset: f64, stride: f64, n: usize) -> f64 {
    let a = (-(s.re + offset + stride * n as f64) * ell).exp();
    if a >= 1.0 {
        return f64::INFINITY;
    }
    let q = (-stride * ell).exp();
    let geometric = a / ((1.0 - a) * (1.0 - q));
    match order {
        0 => geometric,
        1 => ell * geometric,
        2 => ell * ell * geometric / (1.0 - a),
        _ => ell.powi(3) * 2.0 * geometric / (1.0 - a).powi(2),
    }
}

/// Number of factors for a closed form: at least `k_max` past the turning point,
/// extended until the tail is below `tail_tol`.
fn closed_form_terms(order: u32, s: Complex64, ell: f64, offset: f64, stride: f64, policy: &TruncationPolicy) -> usize {
    let mut n = turning_index(s, offset, stride) + policy.k_max + 1;
    while n < MAX_TERMS && factor_tail(order, s, ell, offset, stride, n) > policy.tail_tol * 1e-3 {
        n *= 2;
    }
    n
}

fn check_length(ell: f64) -> Result<()> {
    if ell > 0.0 && ell.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveLength(ell))
    }
}

fn finite_or_zero(v: Complex64, s: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::AtZero(s))
    }
}

/// `Z_M(s) = Π_{k≥0} (1 - e^{-(s+k)ℓ})²` for the hyperbolic cylinder.
pub fn zeta_cylinder(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<ZetaValue> {
    check_length(ell)?;
    let n = closed_form_terms(0, s, ell, 0.0, 1.0, policy);
    Ok(ZetaValue {
        log_value: 2.0 * log_factor_sum(0, s, ell, 0.0, 1.0, n),
        k_tail: 2.0 * factor_tail(0, s, ell, 0.0, 1.0, n),
        l_tail: 0.0,
    })
}

pub fn cylinder_log_derivative(order: u32, s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_length(ell)?;
    let n = closed_form_terms(order, s, ell, 0.0, 1.0, policy);
    finite_or_zero(2.0 * log_factor_sum(order, s, ell, 0.0, 1.0, n), s)
}

/// `Z_F(s) = e^{-sℓ/4} Π_{k≥0} (1 - e^{-(s+2k+1)ℓ})²` for a single funnel.
pub fn zeta_funnel(s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<ZetaValue> {
    check_length(ell)?;
    let n = closed_form_terms(0, s, ell, 1.0, 2.0, policy);
    Ok(ZetaValue {
        log_value: -s * ell / 4.0 + 2.0 * log_factor_sum(0, s, ell, 1.0, 2.0, n),
        k_tail: 2.0 * factor_tail(0, s, ell, 1.0, 2.0, n),
        l_tail: 0.0,
    })
}

pub fn funnel_log_derivative(order: u32, s: Complex64, ell: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_length(ell)?;
    let n = closed_form_terms(order, s, ell, 1.0, 2.0, policy);
    let mut v = 2.0 * log_factor_sum(order, s, ell, 1.0, 2.0, n);
    if order == 1 {
        v -= ell / 4.0;
    }
    finite_or_zero(v, s)
}

/// `Z_Y = Π_j Z_{F_j}` over the funnel ends.
pub fn zeta_y(s: Complex64, funnel_lengths: &[f64], policy: &TruncationPolicy) -> Result<ZetaValue> {
    let mut total = ZetaValue::exact(Complex64::new(0.0, 0.0));
    for &l in funnel_lengths {
        let z = zeta_funnel(s, l, policy)?;
        total.log_value += z.log_value;
        total.k_tail += z.k_tail;
    }
    Ok(total)
}

pub fn zeta_y_log_derivative(
    order: u32,
    s: Complex64,
    funnel_lengths: &[f64],
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    funnel_lengths.iter().map(|&l| funnel_log_derivative(order, s, l, policy)).sum()
}

/// Heuristic growth rate `δ` from `N(L)` and `N(L/2)`; clamped to `(0, 1]`.
fn growth_rate(spec: &LengthSpectrum) -> (f64, f64) {
    let l = spec.l_max;
    let n = spec.total_count() as f64;
    let n_half: f64 = spec.iter().filter(|(len, _)| *len < 0.5 * l).map(|(_, m)| m as f64).sum();
    let delta = if n_half >= 1.0 && n > n_half { (n / n_half).ln() / (0.5 * l) } else { 1.0 };
    (delta.clamp(1e-3, 1.0), n.max(1.0))
}

fn check_spectrum(s: Complex64, spec: &LengthSpectrum) -> Result<f64> {
    if spec.boundary_only {
        return Err(Error::Unsupported("Euler product over funnel boundary lengths".into()));
    }
    if !spec.complete {
        return Err(Error::IncompleteSpectrum { l_max: spec.l_max, requested: spec.l_max });
    }
    if spec.exhaustive {
        return Ok(0.0);
    }
    let (delta, n) = growth_rate(spec);
    let sigma = s.re;
    if sigma <= delta {
        return Err(Error::OutOfConvergenceRegion(s));
    }
    let l = spec.l_max;
    Ok(n * delta * (-sigma * l).exp() / (sigma - delta) / ((1.0 - (-sigma * l).exp()) * (1.0 - (-l).exp())))
}

/// Selberg zeta function as a truncated Euler product over the listed classes.
///
/// `k_tail` bounds the omitted `k > k_max` factors; `l_tail` estimates classes
/// longer than the spectrum cutoff from the growth of `N(L)`. Exceeding
/// `tail_tol` yields `TailTooLarge`, which still carries the value.
pub fn zeta_selberg(s: Complex64, spec: &LengthSpectrum, policy: &TruncationPolicy) -> Result<ZetaValue> {
    let l_tail = check_spectrum(s, spec)?;
    let mut log_value = Complex64::new(0.0, 0.0);
    let mut k_tail = 0.0;
    for (ell, mult) in spec.iter() {
        let n = turning_index(s, 0.0, 1.0) + policy.k_max + 1;
        log_value += mult as f64 * log_factor_sum(0, s, ell, 0.0, 1.0, n);
        k_tail += mult as f64 * factor_tail(0, s, ell, 0.0, 1.0, n);
    }
    let v = ZetaValue { log_value, k_tail, l_tail };
    if v.tail_bound() > policy.tail_tol {
        return Err(Error::TailTooLarge { value: v.value(), tail: v.tail_bound(), tol: policy.tail_tol });
    }
    Ok(v)
}

pub fn selberg_log_derivative(
    order: u32,
    s: Complex64,
    spec: &LengthSpectrum,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    check_spectrum(s, spec)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (ell, mult) in spec.iter() {
        let n = turning_index(s, 0.0, 1.0) + policy.k_max + 1;
        acc += mult as f64 * log_factor_sum(order, s, ell, 0.0, 1.0, n);
    }
    finite_or_zero(acc, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_primitive_classes, pants_from_lengths, SurfaceModel};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn cylinder_at_two() {
        // direct product with 41 factors
        let mut p = 1.0;
        for k in 0..=40 {
            p *= 1.0 - (-(2.0 + k as f64)).exp();
        }
        let z = zeta_cylinder(c(2.0, 0.0), 1.0, &pol()).unwrap().value();
        assert!((z.re - p * p).abs() < 1e-12);
        assert!((z.re - 0.6368).abs() < 1e-4);
        let spec = enumerate_primitive_classes(&SurfaceModel::cylinder(1.0).unwrap(), 2.0, true).unwrap();
        let zs = zeta_selberg(c(2.0, 0.0), &spec, &pol()).unwrap();
        assert_eq!(zs.l_tail, 0.0);
        assert!((zs.value() - z).norm() < 1e-12);
    }

    #[test]
    fn cylinder_zero_and_limit() {
        let s = c(0.0, 2.0 * PI);
        let z = zeta_cylinder(s, 1.0, &pol()).unwrap();
        assert!(z.value().norm() < 1e-12);
        // double zero: |Z(s0 + h)| ~ h²
        let h = 1e-4;
        let r = zeta_cylinder(s + h, 1.0, &pol()).unwrap().value().norm() / (h * h);
        let r2 = zeta_cylinder(s + 2.0 * h, 1.0, &pol()).unwrap().value().norm() / (4.0 * h * h);
        assert!((r / r2 - 1.0).abs() < 1e-3);
        assert!(cylinder_log_derivative(1, s, 1.0, &pol()).map_or(true, |d| d.norm() > 1e10));
        assert!((zeta_cylinder(c(60.0, 3.0), 1.0, &pol()).unwrap().value() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn funnel_zero_and_summation_order() {
        let ell = 2.0;
        let s = c(-1.0, 2.0 * PI / ell);
        assert!(zeta_funnel(s, ell, &pol()).unwrap().value().norm() < 1e-12);
        // backward summation of the logs
        let mut back = 0.0;
        for k in (0..400).rev() {
            back += (-(-(2.0 * (2.0 * k as f64 + 2.0))).exp()).ln_1p();
        }
        let exact = -0.5 + 2.0 * back;
        let z = zeta_funnel(c(1.0, 0.0), ell, &pol()).unwrap().log_value;
        assert!((z.re - exact).abs() < 1e-14, "{} vs {}", z.re, exact);
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn funnel_large_re_asymptotic() {
        let ell = 1.3;
        let s = c(40.0, 1.0);
        let z = zeta_funnel(s, ell, &pol()).unwrap().log_value;
        assert!((z + s * ell / 4.0).norm() < 1e-20);
    }

    #[test]
    fn zeta_y_identities() {
        let s = c(0.7, 1.1);
        assert_eq!(zeta_y(s, &[], &pol()).unwrap().log_value, c(0.0, 0.0));
        let f = zeta_funnel(s, 2.0, &pol()).unwrap().log_value;
        let y = zeta_y(s, &[2.0, 2.0, 2.0], &pol()).unwrap().log_value;
        assert!((y - 3.0 * f).norm() < 1e-14);
        let y2 = zeta_y(s, &[2.0, 2.0], &pol()).unwrap().value();
        let f = zeta_funnel(s, 2.0, &pol()).unwrap().value();
        assert!((y2 - f * f).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = pol();
        for (s, ell) in [(c(2.0, 0.0), 1.0), (c(0.3, 1.7), 2.0), (c(-2.4, 0.5), 1.0)] {
            let h = 1e-5;
            let f = |z: Complex64| zeta_cylinder(z, ell, &p).unwrap().log_value;
            let fd = (f(s + h) - f(s - h)) / (2.0 * h);
            let an = cylinder_log_derivative(1, s, ell, &p).unwrap();
            assert!((fd - an).norm() < 1e-8 * (1.0 + an.norm()), "{fd} vs {an}");
            let g = |z: Complex64| funnel_log_derivative(1, z, ell, &p).unwrap();
            let fd2 = (g(s + h) - g(s - h)) / (2.0 * h);
            let an2 = funnel_log_derivative(2, s, ell, &p).unwrap();
            assert!((fd2 - an2).norm() < 1e-7 * (1.0 + an2.norm()));
            let g2 = |z: Complex64| funnel_log_derivative(2, z, ell, &p).unwrap();
            let fd3 = (g2(s + h) - g2(s - h)) / (2.0 * h);
            let an3 = funnel_log_derivative(3, s, ell, &p).unwrap();
            assert!((fd3 - an3).norm() < 1e-6 * (1.0 + an3.norm()));
        }
    }

    #[test]
    fn doubling_k_max_stays_within_tail() {
        let s = c(0.1, 0.4);
        let p1 = TruncationPolicy { k_max: 20, tail_tol: 1e-2, ..pol() };
        let p2 = TruncationPolicy { k_max: 40, ..p1 };
        let spec = enumerate_primitive_classes(&SurfaceModel::cylinder(0.5).unwrap(), 1.0, true).unwrap();
        let a = zeta_selberg(s, &spec, &p1).unwrap();
        let b = zeta_selberg(s, &spec, &p2).unwrap();
        assert!(a.k_tail > 0.0);
        assert!((a.log_value - b.log_value).norm() <= a.k_tail);
        assert!(matches!(
            zeta_selberg(s, &spec, &TruncationPolicy { k_max: 2, ..p1 }),
            Err(Error::TailTooLarge { .. })
        ));
    }

    #[test]
    fn pants_two_cutoffs_agree() {
        let m = pants_from_lengths(2.0, 2.0, 2.0).unwrap();
        let s8 = enumerate_primitive_classes(&m, 8.0, true).unwrap();
        let s10 = enumerate_primitive_classes(&m, 10.0, true).unwrap();
        let s = c(3.0, 0.0);
        let a = zeta_selberg(s, &s8, &pol()).unwrap();
        let b = zeta_selberg(s, &s10, &pol()).unwrap();
        assert!(a.l_tail > 0.0);
        assert!(
            (a.log_value - b.log_value).norm() <= a.tail_bound(),
            "{} vs {}",
            (a.log_value - b.log_value).norm(),
            a.tail_bound()
        );
        assert!(matches!(zeta_selberg(c(0.3, 0.0), &s8, &pol()), Err(Error::OutOfConvergenceRegion(_))));
    }

    #[test]
    fn selberg_rejects_funnel_and_incomplete() {
        let f = enumerate_primitive_classes(&SurfaceModel::funnel(1.0).unwrap(), 2.0, true).unwrap();
        assert!(matches!(zeta_selberg(c(2.0, 0.0), &f, &pol()), Err(Error::Unsupported(_))));
        let mut spec = LengthSpectrum::from_lengths(vec![1.0], 2.0, true);
        spec.complete = false;
        assert!(matches!(zeta_selberg(c(2.0, 0.0), &spec, &pol()), Err(Error::IncompleteSpectrum { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn selberg_on_cylinder_spectrum_is_zeta_cylinder(re in 0.5f64..6.0, im in -20.0f64..20.0, ell in 0.3f64..4.0) {
            let s = c(re, im);
            let spec = enumerate_primitive_classes(&SurfaceModel::cylinder(ell).unwrap(), ell + 1.0, true).unwrap();
            let p = TruncationPolicy { k_max: 200, ..pol() };
            let a = zeta_selberg(s, &spec, &p).unwrap().log_value;
            let b = zeta_cylinder(s, ell, &p).unwrap().log_value;
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
