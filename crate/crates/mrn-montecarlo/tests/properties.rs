mod common;

use common::*;
use mrn_montecarlo::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn poisson_leap_keeps_integer_nonnegative_populations(tau in 0.01f64..3.0, k1 in 0.05f64..1.0, seed in any::<u64>()) {
        let net = mrn_models::sir(k1, 1.0).unwrap();
        let traj = simulate_poisson_leap(&net, 10.0, tau, seed).unwrap();
        for (z, x) in traj.da.iter().zip(traj.population_path(&net)) {
            prop_assert!(z.iter().all(|v| v.fract() == 0.0 && *v >= 0.0));
            prop_assert!(x.iter().all(|v| v.fract() == 0.0 && *v >= 0.0));
        }
        prop_assert!(traj.da.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a <= b)));
    }

    #[test]
    fn avalanche_count_ignores_grid_refinement(values in proptest::collection::vec(0u8..3, 1..40), splits in proptest::collection::vec(0usize..4, 40)) {
        let times: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let values: Vec<f64> = values.iter().map(|v| f64::from(*v)).collect();
        let horizon = values.len() as f64;
        let coarse = count_avalanches(&times, &values, horizon, None).unwrap();
        // repeat every breakpoint at intermediate times with an unchanged value
        let (mut ft, mut fv) = (Vec::new(), Vec::new());
        for (i, (t, v)) in times.iter().zip(&values).enumerate() {
            for j in 0..=splits[i] {
                ft.push(t + j as f64 / (splits[i] + 1) as f64);
                fv.push(*v);
            }
        }
        prop_assert_eq!(count_avalanches(&ft, &fv, horizon, None).unwrap(), coarse);
    }

    #[test]
    fn identical_seeds_give_identical_trajectories(seed in any::<u64>(), tau in 0.01f64..1.0) {
        let net = mrn_models::sir(0.3, 1.0).unwrap();
        prop_assert_eq!(simulate_ssa(&net, 5.0, seed).unwrap(), simulate_ssa(&net, 5.0, seed).unwrap());
        prop_assert_eq!(simulate_poisson_leap(&net, 5.0, tau, seed).unwrap(), simulate_poisson_leap(&net, 5.0, tau, seed).unwrap());
        prop_assert_eq!(simulate_langevin(&net, 5.0, tau, seed).unwrap(), simulate_langevin(&net, 5.0, tau, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn weighted_indicator_means_are_unbiased(lb in 0.5f64..2.0, ld in 0.5f64..2.0, seed in any::<u64>()) {
        let net = birth_death(4.0, 1.0);
        // a short horizon keeps the likelihood ratios light-tailed, so the
        // sample standard errors are trustworthy at this ensemble size
        let t = 0.5;
        let l = 4000;
        let event = |_: &[f64], x: &[f64]| x[0] >= 2.0;
        let plain = simulate_ensemble(&net, &[t], &EnsembleOptions::new(Method::Ssa, l, seed)).unwrap();
        let biased = simulate_ensemble(&net, &[t], &EnsembleOptions::new(Method::Weighted(vec![lb, ld]), l, seed ^ 0x5555)).unwrap();
        let a = estimate_probability(&plain, event);
        let b = estimate_probability(&biased, event);
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        prop_assert!((a.p - b.p).abs() < 3.0 * se, "{} vs {} (se {se})", a.p, b.p);
    }
}
