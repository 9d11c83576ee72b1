mod common;

use std::f64::consts::PI;

use common::{c, third_divided_difference};
use hyperzeta::groups::{enumerate_primitive_classes, pants_from_lengths};
use hyperzeta::zeta::{
    funnel_cubic_tail, hadamard_funnel, log_zeta_infinity, zeta_cylinder, zeta_funnel, zeta_selberg, zeta_y,
    TruncationPolicy,
};
use hyperzeta::Complex64;
use proptest::prelude::*;

fn policy(k_max: usize, radius: f64) -> TruncationPolicy {
    TruncationPolicy { k_max, radius, ..TruncationPolicy::default() }
}

fn cot(z: Complex64) -> Complex64 {
    z.cos() / z.sin()
}

/// Naive product over the listed classes, no tail handling.
fn naive_selberg(s: Complex64, lengths: &[(f64, u64)], k_terms: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(l, m) in lengths {
        for k in 0..k_terms {
            acc += m as f64 * (1.0 - (-(s + k as f64) * l).exp()).ln();
        }
    }
    acc
}

#[test]
fn pants_selberg_against_naive_product() {
    let model = pants_from_lengths(2.0, 2.0, 2.0).unwrap();
    let spec = enumerate_primitive_classes(&model, 10.0, true).unwrap();
    let classes: Vec<(f64, u64)> = spec.iter().collect();
    let p = TruncationPolicy { tail_tol: 1e-2, ..TruncationPolicy::default() };
    for s in [c(4.0, 0.0), c(3.5, 2.0), c(5.0, -7.0)] {
        let got = zeta_selberg(s, &spec, &p).unwrap();
        let want = naive_selberg(s, &classes, 60);
        assert!((got.log_value - want).norm() < 1e-12, "{s}: {} vs {want}", got.log_value);
    }
}

#[test]
fn funnel_power_identities() {
    let p = TruncationPolicy::default();
    let s = c(0.7, 1.9);
    let one = zeta_funnel(s, 2.0, &p).unwrap().log_value;
    let three = zeta_y(s, &[2.0, 2.0, 2.0], &p).unwrap().log_value;
    assert!((three - 3.0 * one).norm() < 1e-13);
    assert_eq!(zeta_y(s, &[], &p).unwrap().log_value, c(0.0, 0.0));
}

#[test]
fn zeta_infinity_special_values() {
    assert!((log_zeta_infinity(c(1.0, 0.0), -1).unwrap() - c((2.0 * PI).ln(), 0.0)).norm() < 1e-12);
    assert_eq!(log_zeta_infinity(c(2.3, 1.0), 0).unwrap(), c(0.0, 0.0));
    assert!(log_zeta_infinity(c(-2.0, 0.0), -1).is_err());
    assert!(log_zeta_infinity(c(1.0, 0.0), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zinf_reflection(chi in -3i64..=-1, re in 0.05f64..0.95, im in -3.0f64..3.0) {
        let s = c(re, im);
        let h = 1e-5;
        let g = |z: Complex64| log_zeta_infinity(z, chi).unwrap() - log_zeta_infinity(1.0 - z, chi).unwrap();
        let fd = (g(s + h) - g(s - h)) / (2.0 * h);
        let want = -(chi as f64) * (2.0 * s - 1.0) * PI * cot(PI * s);
        prop_assert!((fd - want).norm() < 1e-6 * (1.0 + want.norm()), "{} vs {}", fd, want);
    }

    #[test]
    fn funnel_over_hadamard_is_quadratic(
        ell in 0.7f64..3.0,
        re in -1.5f64..1.5, im in -2.0f64..2.0,
        angle in 0.0f64..(2.0 * PI),
    ) {
        let radius = 200.0;
        let p = policy(100, radius);
        let f = |s: Complex64| {
            zeta_funnel(s, ell, &p).unwrap().log_value - hadamard_funnel(s, ell, &p).unwrap().log_value
                - funnel_cubic_tail(s, ell, radius)
        };
        let d = third_divided_difference(&f, c(re, im), Complex64::from_polar(0.2, angle));
        prop_assert!(d.norm() < 1e-6, "{}", d);
    }

    #[test]
    fn doubling_k_max_within_tail(ell in 0.3f64..3.0, re in -3.0f64..3.0, im in -10.0f64..10.0) {
        let s = c(re, im);
        let a = zeta_cylinder(s, ell, &policy(20, 60.0)).unwrap();
        let b = zeta_cylinder(s, ell, &policy(40, 60.0)).unwrap();
        prop_assert!((a.log_value - b.log_value).norm() <= a.tail_bound() + b.tail_bound() + 1e-13 * (1.0 + a.log_value.norm()));
        let a = zeta_funnel(s, ell, &policy(20, 60.0)).unwrap();
        let b = zeta_funnel(s, ell, &policy(40, 60.0)).unwrap();
        prop_assert!((a.log_value - b.log_value).norm() <= a.tail_bound() + b.tail_bound() + 1e-13 * (1.0 + a.log_value.norm()));
    }

    #[test]
    fn doubling_radius_within_tail(ell in 0.5f64..3.0, re in -2.0f64..2.0, im in -3.0f64..3.0) {
        let s = c(re, im);
        let a = hadamard_funnel(s, ell, &policy(100, 25.0)).unwrap();
        let b = hadamard_funnel(s, ell, &policy(100, 50.0)).unwrap();
        prop_assert!((a.log_value - b.log_value).norm() <= a.tail_bound(), "{} > {}", (a.log_value - b.log_value).norm(), a.tail_bound());
    }
}
