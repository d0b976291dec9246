mod common;

use common::*;
use mrn_models::transcription;
use mrn_multiscale::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn dimer_root_balances_the_fast_pair(p in -40i64..400, q in 0i64..200, kf in 0.01f64..10.0, kb in 0.0f64..10.0) {
        prop_assume!(p + 2 * q >= 0);
        let d = dimer_equilibrium_closure(p, q, kf, kb).unwrap();
        let (m, dim) = (p as f64 - 2.0 * d, q as f64 + d);
        // both estimated counts are admissible
        let total = (p + 2 * q) as f64;
        prop_assert!(m >= -1e-9 * total.max(1.0) && m <= total + 1e-9);
        prop_assert!(dim >= -1e-9 * total.max(1.0) && dim <= total / 2.0 + 1e-9);
        // forward and backward propensities balance
        let fwd = kf * m * (m - 1.0) / 2.0;
        let bwd = kb * dim;
        prop_assert!((fwd - bwd).abs() <= 1e-8 * (fwd.abs() + bwd.abs()).max(1.0), "{fwd} vs {bwd}");
    }

    #[test]
    fn estimates_respect_conservation_laws(
        extra in proptest::array::uniform5(0u64..60),
        genes in prop_oneof![Just([2i64, 0, 0]), Just([1, 1, 0]), Just([0, 2, 0]), Just([1, 0, 1]), Just([0, 1, 1]), Just([0, 0, 2])],
        mrna in 0u64..30,
    ) {
        let net = transcription::network().unwrap();
        let part = MultiscalePartition::new(&net, &transcription::FAST_REACTIONS).unwrap();
        let closure = DimerClosure::from_network(&net, &part).unwrap();
        let zs = transcription_slow_da(extra, genes, mrna);
        let xs = part.slow_population(&net, &zs);
        prop_assume!(xs[1] + 2 * xs[2] >= 0);
        let x = estimate_population_from_slow(&net, &part, &zs, Some(&closure)).unwrap();
        // left null vectors of the fast stoichiometry are untouched
        prop_assert!((x[1] + 2.0 * x[2] - (xs[1] + 2 * xs[2]) as f64).abs() < 1e-9 * x[1].abs().max(1.0));
        prop_assert_eq!(x[0], xs[0] as f64);
        prop_assert_eq!(&x[3..], &[genes[0] as f64, genes[1] as f64, genes[2] as f64][..]);
        // and so is the gene-copy law of the full network
        prop_assert_eq!(x[3] + x[4] + x[5], 2.0);
    }
}
