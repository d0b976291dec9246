mod common;

use std::collections::BTreeSet;

use common::*;
use mrn_network::{ReactionNetwork, Species};
use mrn_statespace::*;
use proptest::prelude::*;

/// Closed three-species conversion network with `n` molecules; irreducible
/// whenever every rate is positive.
fn closed_triangle(n: i64, k: [f64; 6]) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, n, n), Species::new("B", 0, n, 0), Species::new("C", 0, n, 0)];
    let reactions = vec![
        reaction(&[1, 0, 0], &[0, 1, 0], k[0]),
        reaction(&[0, 1, 0], &[1, 0, 0], k[1]),
        reaction(&[0, 1, 0], &[0, 0, 1], k[2]),
        reaction(&[0, 0, 1], &[0, 1, 0], k[3]),
        reaction(&[0, 0, 1], &[1, 0, 0], k[4]),
        reaction(&[1, 0, 0], &[0, 0, 1], k[5]),
    ];
    ReactionNetwork::new(species, reactions, vec![(0, 1), (2, 3), (4, 5)]).unwrap()
}

fn rates6() -> impl Strategy<Value = [f64; 6]> {
    proptest::array::uniform6(0.1f64..3.0)
}

fn rates4() -> impl Strategy<Value = [f64; 4]> {
    proptest::array::uniform4(0.0f64..3.0)
}

fn generator(net: &ReactionNetwork) -> (StateSpace, Generator) {
    let space = enumerate_state_space(net, &SpaceOptions::population()).unwrap();
    let g = build_generator(net, &space, Truncation::Absorbing).unwrap();
    (space, g)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn generator_columns_balance(n in 1i64..9, k in rates4()) {
        let net = open_pair(n, k);
        let (_, g) = generator(&net);
        for (j, (s, o)) in g.column_sums().iter().zip(g.outflow()).enumerate() {
            prop_assert!((s + o).abs() < 1e-12, "column {j}");
            for (_, v) in g.column(j) {
                prop_assert!(v >= 0.0);
            }
        }
    }

    #[test]
    fn closed_generator_columns_sum_to_zero(n in 1i64..8, k in rates6()) {
        let (_, g) = generator(&closed_triangle(n, k));
        prop_assert_eq!(g.total_outflow_rate(), 0.0);
        prop_assert!(g.column_sums().iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn ie_is_unconditionally_stable(x0 in (1i64..8, 1i64..4), k1 in 0.05f64..2.0, k2 in 0.05f64..2.0) {
        let net = sir_from([x0.0, x0.1, 0], k1, k2);
        let horizon = (2 * x0.0 + x0.1) as u64;
        let da = enumerate_state_space(&net, &SpaceOptions::da(horizon)).unwrap();
        let q = build_generator(&net, &da, Truncation::Strict).unwrap();
        prop_assert_eq!(q.total_outflow_rate(), 0.0);
        for tau in [0.01, 0.1, 1.0, 10.0] {
            let out = propagate_ie(&q, &delta(da.len(), 0), 3.0 * tau, Some(tau)).unwrap();
            prop_assert!(out.p.iter().all(|v| (0.0..=1.0).contains(v)));
            prop_assert!((out.p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn kl_distance_to_stationarity_never_increases(n in 1i64..7, k in rates6(), start in 0usize..1000) {
        let (space, g) = generator(&closed_triangle(n, k));
        let p_bar = stationary_distribution(&g).unwrap();
        prop_assert!(p_bar.iter().all(|v| *v > 0.0));
        let times: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
        let p0 = delta(space.len(), start % space.len());
        let grid = propagate_ksa_grid(&g, &p0, &times, &KsaOptions::default()).unwrap();
        let mut last = kl_divergence(&p0, &p_bar);
        for o in grid {
            let d = kl_divergence(&o.p, &p_bar);
            prop_assert!(d <= last + 1e-7, "D rose from {last} to {d} at t = {}", o.t);
            last = d;
        }
    }

    #[test]
    fn eigen_and_ksa_agree(n in 1i64..9, k in rates4(), t in 0.05f64..3.0) {
        let net = open_pair(n, k);
        let (space, g) = generator(&net);
        prop_assume!(space.len() <= 200);
        let p0 = delta(space.len(), 0);
        let Ok(sol) = eigen_solution(&g, &p0, &[t]) else {
            // numerically defective draws are legitimately refused
            return Ok(());
        };
        let opts = KsaOptions { tol: 1e-10, ..KsaOptions::default() };
        let ksa = propagate_ksa(&g, &p0, t, &opts).unwrap();
        let err = sol.distributions[0].iter().zip(&ksa.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-6, "sup error {err}");
    }

    #[test]
    fn classification_matches_reachability(x0 in (1i64..6, 1i64..4), k1 in 0.0f64..2.0, k2 in 0.0f64..2.0) {
        let net = sir_from([x0.0, x0.1, 0], k1, k2);
        let (_, g) = generator(&net);
        let c = classify_communicating_structure(&g).unwrap();
        let reach = |s: usize| -> BTreeSet<usize> {
            let mut seen: BTreeSet<usize> = [s].into_iter().collect();
            let mut stack = vec![s];
            while let Some(j) = stack.pop() {
                for (i, v) in g.column(j) {
                    if v > 0.0 && seen.insert(i) {
                        stack.push(i);
                    }
                }
            }
            seen
        };
        for class in &c.persistent {
            let members: BTreeSet<usize> = class.iter().copied().collect();
            for &s in class {
                prop_assert_eq!(&reach(s), &members);
            }
        }
        for &t in &c.transient {
            // some reachable state cannot lead back
            prop_assert!(reach(t).iter().any(|&u| !reach(u).contains(&t)));
        }
        prop_assert_eq!(c.transient.len() + c.persistent.iter().map(Vec::len).sum::<usize>(), g.dim());
        for row in &c.absorption {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(row.iter().all(|v| *v >= 0.0));
        }
    }
}
