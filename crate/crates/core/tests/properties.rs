use orlicz_core::counterexample::{self as cx, CounterexampleParams};
use orlicz_core::mc;
use orlicz_core::norms;
use orlicz_core::quad;
use orlicz_core::space::{self, f_half, indicator, MeasureDomain};
use orlicz_core::young::{self, YoungFunction};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integral_is_affine_invariant(a in -3.0f64..3.0, w in 0.1f64..5.0, k in 0.5f64..4.0) {
        let g = |x: f64| (k * x).sin().powi(2) + x * x;
        let direct = quad::integrate_fn(g, a, a + w, 1e-11, &Default::default()).unwrap().value;
        let mapped = quad::integrate_fn(|t| w * g(a + w * t), 0.0, 1.0, 1e-11, &Default::default()).unwrap().value;
        prop_assert!(close(direct, mapped, 1e-10));
    }

    #[test]
    fn lp_norm_is_homogeneous(c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], p in 1.0f64..8.0) {
        let f = f_half().without_closed_forms();
        let base = norms::lp_norm(&f, p, 1e-10).unwrap().value;
        let scaled = norms::lp_norm(&f.scaled(c), p, 1e-10).unwrap().value;
        prop_assert!(close(scaled, c.abs() * base, 1e-8));
    }

    #[test]
    fn luxemburg_norm_is_homogeneous(c in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0], a in 0.01f64..0.9) {
        let f = indicator(0.0, a, MeasureDomain::unit()).unwrap();
        let phi = YoungFunction::exp_square();
        let base = norms::luxemburg_norm(&f, &phi, 1e-12).unwrap().value;
        let scaled = norms::luxemburg_norm(&f.scaled(c), &phi, 1e-12).unwrap().value;
        prop_assert!(close(scaled, c.abs() * base, 1e-8));
    }

    #[test]
    fn tail_is_nonincreasing(z1 in 0.0f64..4.0, dz in 0.0f64..2.0) {
        let f = f_half().without_closed_forms();
        let a = space::tail(&f, z1, 1e-13).unwrap();
        let b = space::tail(&f, z1 + dz, 1e-13).unwrap();
        prop_assert!(b <= a + 1e-13);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn inverse_undoes_young(p0 in 1.0f64..6.0, u in 1e-3f64..1e3) {
        for phi in [YoungFunction::power(p0).unwrap(), YoungFunction::log_tempered_power(p0).unwrap()] {
            let y = phi.eval(u);
            let back = young::inverse_young(&phi, y, 1e-15).unwrap();
            prop_assert!(close(back, u, 1e-9), "{} at u={}: {}", phi.label(), u, back);
        }
    }

    #[test]
    fn power_delta2_ratio_is_exact(p0 in 1.0f64..6.0) {
        let phi = YoungFunction::power(p0).unwrap();
        let d = young::delta2_profile(&phi, &quad::log_space(1e-2, 1e6, 9)).unwrap();
        prop_assert!(d.bounded);
        prop_assert!(close(d.sup_ratio, 2f64.powf(p0), 1e-12));
    }

    #[test]
    fn loglog_fit_recovers_power_laws(slope in -5.0f64..5.0, lnc in -10.0f64..10.0) {
        let pts: Vec<(f64, f64)> = quad::log_space(1.0, 1e6, 13)
            .into_iter()
            .map(|x| (x, lnc.exp() * x.powf(slope)))
            .collect();
        let fit = quad::loglog_fit(&pts).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-10);
        prop_assert!((fit.intercept - lnc).abs() < 1e-8);
        prop_assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn block_norms_decrease_in_the_probability_case(n in 10u64..1_000_000, p in 1.0f64..1.99) {
        let sys = cx::build_system(CounterexampleParams::probability(0.5, 2.0)).unwrap();
        let a = cx::block_lp_exact(&sys, n, p).unwrap();
        let b = cx::block_lp_exact(&sys, n + 1, p).unwrap();
        prop_assert!(b < a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>()) {
        let sys = cx::build_system(CounterexampleParams::probability(0.5, 2.0)).unwrap();
        let a = mc::sample_sup(&sys, seed, 2_000).unwrap();
        let b = mc::sample_sup(&sys, seed, 2_000).unwrap();
        prop_assert_eq!(a.values, b.values);
    }
}
