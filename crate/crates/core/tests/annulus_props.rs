use cloak_core::annulus::*;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (entry(), entry(), entry(), entry())
        .prop_map(|(a, b, c, d)| [[a, b], [c, d]])
        .prop_filter("nonsingular", |m| det2(m).abs() > 1e-3)
}

fn vector() -> impl Strategy<Value = Vec2> {
    (entry(), entry()).prop_map(|(a, b)| [a, b]).prop_filter("nonzero", |v| norm_sq(*v) > 1e-4)
}

proptest! {
    #[test]
    fn push_forward_has_unit_determinant(m in matrix()) {
        let t = push_forward_tensor(&m).unwrap();
        prop_assert!((t.det() - 1.0).abs() <= 1e-12 * t.trace() * t.trace());
        prop_assert!(t.a > 0.0 && t.c > 0.0);
    }

    #[test]
    fn trace_identity_for_positive_determinant(m in matrix()) {
        prop_assume!(det2(&m) > 0.0);
        let t = push_forward_tensor(&m).unwrap();
        let mtm = mat_mul(&transpose(&m), &m);
        let expected = (mtm[0][0] + mtm[1][1]) / det2(&m);
        prop_assert!((t.trace() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn eigenvalues_are_reciprocal(m in matrix()) {
        let t = push_forward_tensor(&m).unwrap();
        let (l1, l2) = t.eigenvalues();
        prop_assert!(0.0 < l1 && l1 <= 1.0 + 1e-12 && 1.0 - 1e-12 <= l2);
        prop_assert!((l1 * l2 - 1.0).abs() <= 1e-9 * l2);
    }

    #[test]
    fn anisotropy_matches_eigenvalue_distance(m in matrix()) {
        let t = push_forward_tensor(&m).unwrap();
        let (l1, l2) = t.eigenvalues();
        let direct = (l1 - 1.0).abs() + (l2 - 1.0).abs();
        prop_assert!((anisotropy_measure(&t) - direct).abs() <= 1e-10 * (1.0 + direct));
    }

    #[test]
    fn trace_is_bounded_by_magnitude_ratio(dp in vector(), dt in vector()) {
        let g = GradientPair::new(dp, dt);
        prop_assume!(g.det() > 1e-6);
        let (mp, mt, _) = g.polar_form();
        let bound = mt / mp + mp / mt;
        let t = trace_from_gradients(&g).unwrap();
        prop_assert!(t >= bound * (1.0 - 1e-12));
        prop_assert!(t >= 2.0 * (1.0 - 1e-12));
    }

    #[test]
    fn angle_form_agrees(dp in vector(), dt in vector()) {
        let g = GradientPair::new(dp, dt);
        prop_assume!(g.det() > 1e-6);
        let (mp, mt, angle) = g.polar_form();
        let a = trace_angle_form(mp, mt, angle).unwrap();
        let b = trace_from_gradients(&g).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn radial_trace_is_at_least_two(r in 0.01f64..1.0, s in 0.01f64..50.0) {
        let t = radial_trace(r, s).unwrap();
        prop_assert!(t >= 2.0);
    }

    #[test]
    fn radial_gradients_reproduce_radial_trace(x in vector(), s in 0.05f64..20.0) {
        let r = norm_sq(x).sqrt();
        let g = GradientPair::radial(x, s);
        let a = trace_from_gradients(&g).unwrap();
        prop_assert!((a - radial_trace(r, s).unwrap()).abs() <= 1e-12 * a);
    }

    #[test]
    fn polar_map_push_forward_trace(dp in vector(), dt in vector(), theta in 0.0f64..std::f64::consts::TAU) {
        // Phi = exp(psi) (cos theta, sin theta): the push-forward trace does
        // not depend on the amplitude or the direction.
        let g = GradientPair::new(dp, dt);
        prop_assume!(g.det() > 1e-6);
        let t = push_forward_tensor(&g.scaled_jacobian(theta)).unwrap();
        let expected = trace_from_gradients(&g).unwrap();
        prop_assert!((t.trace() - expected).abs() <= 1e-11 * expected);
    }
}

#[test]
fn orthogonal_equality_case() {
    let g = GradientPair::new([2.0, 0.0], [0.0, 0.5]);
    let (mp, mt, _) = g.polar_form();
    assert!((trace_from_gradients(&g).unwrap() - (mt / mp + mp / mt)).abs() < 1e-15);
    let skew = GradientPair::new([2.0, 0.3], [0.0, 0.5]);
    let (mp, mt, _) = skew.polar_form();
    assert!(trace_from_gradients(&skew).unwrap() > mt / mp + mp / mt + 1e-6);
}
