use hyperzeta::geometry::{collar_bound, distance, geodesic_distance, sigma, GeodesicLine, HalfPlanePoint, MobiusMap};
use proptest::prelude::*;

fn mobius() -> impl Strategy<Value = MobiusMap> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("nondegenerate", |(a, b, c, d)| (a * d - b * c) > 0.05)
        .prop_map(|(a, b, c, d)| MobiusMap::new(a, b, c, d).unwrap())
}

fn point() -> impl Strategy<Value = HalfPlanePoint> {
    (-10.0f64..10.0, 0.01f64..10.0).prop_map(|(x, y)| HalfPlanePoint::new(x, y).unwrap())
}

/// Distance from a point to the imaginary axis: `sinh d = |x|/y`.
fn distance_to_axis(p: HalfPlanePoint) -> f64 {
    (p.x.abs() / p.y).asinh()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn translation_length_is_conjugation_invariant(len in 0.05f64..6.0, g in mobius()) {
        let m = MobiusMap::dilation(len);
        let conj = m.conjugate_by(&g);
        let l = conj.translation_length().unwrap();
        prop_assert!((l - len).abs() < 1e-10 * (1.0 + g.max_abs_entry().powi(4)));
    }

    #[test]
    fn sigma_matches_cosh_of_half_distance(z in point(), w in point()) {
        // cosh d = 1 + |z - w|²/(2 y y')
        let dx = z.x - w.x;
        let dy = z.y - w.y;
        let cosh_d = 1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y);
        let expected = (1.0 + cosh_d) / 2.0;
        prop_assert!((sigma(z, w) - expected).abs() <= 1e-10 * expected);
        let d = distance(z, w);
        prop_assert!(((d / 2.0).cosh().powi(2) - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn geodesic_distance_symmetric_and_invariant(
        p1 in -5.0f64..5.0, q1 in -5.0f64..5.0, p2 in -5.0f64..5.0, q2 in -5.0f64..5.0, g in mobius()
    ) {
        prop_assume!((p1 - q1).abs() > 0.1 && (p2 - q2).abs() > 0.1);
        prop_assume!([p2, q2].iter().all(|x| (x - p1).abs() > 0.05 && (x - q1).abs() > 0.05));
        let a = GeodesicLine::semicircle(p1, q1).unwrap();
        let b = GeodesicLine::semicircle(p2, q2).unwrap();
        let d = geodesic_distance(&a, &b).unwrap();
        prop_assert!((d - geodesic_distance(&b, &a).unwrap()).abs() < 1e-8);
        if let (Ok(ga), Ok(gb)) = (a.transform(&g), b.transform(&g)) {
            let dg = geodesic_distance(&ga, &gb).unwrap();
            prop_assert!((d - dg).abs() < 1e-8 * (1.0 + d), "{} vs {}", d, dg);
        }
    }

    #[test]
    fn collar_property(len in 0.1f64..6.0, t in 0.0f64..1.0) {
        let a_max = (len / 2.0).exp();
        let a = 1.0 + (a_max - 1.0) * (1e-3 + (1.0 - 1e-3) * t);
        let circle = GeodesicLine::semicircle(1.0 / a, a).unwrap();
        let d = geodesic_distance(&GeodesicLine::vertical(0.0), &circle).unwrap();
        prop_assert!(d >= collar_bound(len).unwrap() - 1e-8);
    }
}

#[test]
fn distance_against_sampled_minimum() {
    let axis = GeodesicLine::vertical(0.0);
    for a in [1.2f64, 2.0, 5.0] {
        let circle = GeodesicLine::semicircle(1.0 / a, a).unwrap();
        let sampled =
            (1..20_000).map(|i| distance_to_axis(circle.point_at(i as f64 / 20_000.0))).fold(f64::INFINITY, f64::min);
        let d = geodesic_distance(&axis, &circle).unwrap();
        assert!(d <= sampled + 1e-12);
        assert!(sampled - d < 1e-6, "{a}: {d} vs {sampled}");
    }
}
