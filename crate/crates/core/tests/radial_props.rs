use cloak_core::radial::*;
use cloak_core::{AnnulusSpec, PNorm};
use cloak_oracles as oracle;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(eps: f64) -> AnnulusSpec {
    AnnulusSpec::new(eps).unwrap()
}

#[test]
fn closed_form_energies_match_simpson() {
    for eps in [0.01, 0.1, 0.25, 0.5] {
        let s = spec(eps);
        let f1 = energy_p(&profile_p1(&s, 64).unwrap(), 1.0, QUAD_TOL).unwrap().value;
        let fra = energy_p(&profile_affine(&s, 64).unwrap(), 1.0, QUAD_TOL).unwrap().value;
        assert!((f1 - oracle::i1_f1(eps)).abs() <= 1e-9 * f1, "eps = {eps}");
        assert!((fra - oracle::i1_fra(eps)).abs() <= 1e-9 * fra, "eps = {eps}");
        let simpson = oracle::radial_energy(|r| oracle::f1_slope(r, eps), eps, 1.0, 4000);
        assert!((f1 - simpson).abs() <= 1e-8 * f1);
    }
}

#[test]
fn solver_matches_closed_form_profile() {
    let s = spec(0.1);
    let f = solve_optimal_profile(&s, 1.0, 200, ROOT_TOL).unwrap();
    for (&r, &v) in f.nodes.iter().zip(&f.values) {
        assert!((v - oracle::f1(r, 0.1)).abs() < 1e-9, "r = {r}");
    }
}

#[test]
fn solver_matches_brute_force_minimizer() {
    // The steep profile at eps = 0.01 needs a finer trapezoid rule.
    for (p, eps, n) in [(1.0, 0.1, 200), (2.0, 0.1, 200), (2.0, 0.01, 400)] {
        let brute = oracle::brute_force_profile(eps, p, n);
        assert!(brute.stationarity <= 1e-10);
        let f = solve_optimal_profile(&spec(eps), p, n, ROOT_TOL).unwrap();
        let err = f.values.iter().zip(&brute.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-4, "p = {p}, eps = {eps}: {err:e}");
    }
}

#[test]
fn optimal_profile_beats_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for eps in [0.1, 0.01] {
        let s = spec(eps);
        for p in [1.0, 2.0, 3.0] {
            let best =
                energy_p(&solve_optimal_profile(&s, p, 200, ROOT_TOL).unwrap(), p, QUAD_TOL).unwrap().value;
            for _ in 0..100 {
                let g = random_admissible_profile(&s, 40, &mut rng).unwrap();
                let e = energy_p(&g, p, QUAD_TOL).unwrap().value;
                assert!(e >= best * (1.0 - 1e-8), "p = {p}: {e} < {best}");
            }
        }
    }
}

#[test]
fn minimax_profile_beats_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for eps in [0.01, 0.1, 0.25] {
        let s = spec(eps);
        let best = energy_inf(&profile_minimax(&s, 32).unwrap()).unwrap().value;
        assert!((best - oracle::i_inf(eps)).abs() <= 1e-10);
        for _ in 0..100 {
            let g = random_admissible_profile(&s, 40, &mut rng).unwrap();
            assert!(energy_inf(&g).unwrap().value >= best - 1e-9);
        }
        let affine = energy_inf(&profile_affine(&s, 200).unwrap()).unwrap().value;
        assert!(affine > best);
    }
}

#[test]
fn affine_dominance() {
    for eps in [0.01, 0.05, 0.1, 0.25, 0.49, 0.5] {
        let s = spec(eps);
        let f1 = energy_p(&profile_p1(&s, 32).unwrap(), 1.0, QUAD_TOL).unwrap().value;
        let fra = energy_p(&profile_affine(&s, 32).unwrap(), 1.0, QUAD_TOL).unwrap().value;
        if eps == 0.5 {
            assert!((fra - f1).abs() <= 1e-10);
        } else {
            assert!(fra > f1 + 1e-10, "eps = {eps}");
        }
    }
}

#[test]
fn shooting_constant_sign() {
    for eps in [0.01, 0.1, 0.3, 0.5] {
        for p in [1.0, 2.0, 4.0] {
            let c = solve_optimal_profile(&spec(eps), p, 32, ROOT_TOL).unwrap().shooting_constant.unwrap();
            if eps == 0.5 {
                assert_eq!(c, 0.0);
            } else {
                assert!(c < 0.0);
            }
        }
    }
}

#[test]
fn profile_family_is_ordered_at_one_tenth() {
    let s = spec(0.01);
    let mut last = f64::NEG_INFINITY;
    for p in [1.0, 2.0, 3.0, 5.0, 8.0, 13.0] {
        let v = solve_optimal_profile(&s, p, 200, ROOT_TOL).unwrap().value_at(0.1).unwrap();
        assert!(v > last, "p = {p}");
        last = v;
    }
    let inf = build_profile(&s, ProfileChoice::Optimal(PNorm::Infinity), 200, ROOT_TOL).unwrap();
    assert!(inf.value_at(0.1).unwrap() > last);
}

#[test]
fn el_residual_examples() {
    let s = spec(0.01);
    let f2 = solve_optimal_profile(&s, 2.0, 400, ROOT_TOL).unwrap();
    assert!(el_residual(&f2, 2.0).unwrap() <= 1e-8);
    assert!(el_residual(&profile_p1(&s, 400).unwrap(), 1.0).unwrap() <= 1e-10);
    assert!(el_residual(&profile_affine(&s, 400).unwrap(), 1.0).unwrap() > 1e-2);
}

#[test]
fn energies_respect_trace_lower_bound() {
    let s = spec(0.1);
    for p in [1.0, 2.5] {
        let e = energy_p(&profile_affine(&s, 32).unwrap(), p, QUAD_TOL).unwrap().value;
        assert!(e >= s.area() * 2f64.powf(p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_inverse_round_trips(t in 0.05f64..20.0, p in 1.0f64..6.0) {
        let s = g_function(t, p).unwrap();
        let back = g_inverse(s, p, 1e-13).unwrap();
        prop_assert!((back - t).abs() <= 1e-8 * t);
    }

    #[test]
    fn g_inverse_is_monotone(a in -50.0f64..0.99, b in -50.0f64..0.99, p in 1.0f64..5.0) {
        prop_assume!(a < b);
        prop_assert!(g_inverse(a, p, 1e-13).unwrap() <= g_inverse(b, p, 1e-13).unwrap());
    }

    #[test]
    fn midpoint_convexity(seed in any::<u64>(), p in 1.0f64..4.0) {
        let s = spec(0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_admissible_profile(&s, 24, &mut rng).unwrap();
        let g = random_admissible_profile(&s, 24, &mut rng).unwrap();
        let m = f.midpoint(&g).unwrap();
        let ef = energy_p(&f, p, QUAD_TOL).unwrap().value;
        let eg = energy_p(&g, p, QUAD_TOL).unwrap().value;
        let em = energy_p(&m, p, QUAD_TOL).unwrap().value;
        prop_assert!(em <= 0.5 * (ef + eg) * (1.0 + 1e-8));
    }

    #[test]
    fn random_profiles_meet_boundary_values(seed in any::<u64>(), eps in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_admissible_profile(&spec(eps), 20, &mut rng).unwrap();
        prop_assert!(f.validate(1e-10).is_ok());
        prop_assert!((f.value_at(1.0).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn p1_range_error() {
    assert!(g_inverse(1.0, 1.0, 1e-12).is_err());
    assert!(g_inverse(0.999, 1.0, 1e-12).is_ok());
}
