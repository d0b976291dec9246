use mrn_lna::*;
use mrn_models::neural::{network as neural, NeuralParams};
use mrn_models::opinion::{network as opinion, OpinionParams};
use mrn_network::ReactionNetwork;
use proptest::prelude::*;

fn nets() -> Vec<(ReactionNetwork, f64)> {
    vec![
        (opinion(&OpinionParams::liberal()).unwrap(), 40.0),
        (opinion(&OpinionParams::totalitarian()).unwrap(), 40.0),
        (neural(&NeuralParams::synchronous()).unwrap(), 100.0),
        (mrn_models::sir(0.3, 1.0).unwrap(), 12.0),
        (mrn_models::transcription::network().unwrap(), 1.0),
        (mrn_models::transcription::network().unwrap(), 7.5),
        (mrn_models::pharmacokinetic().unwrap(), 3.0),
        (mrn_models::autocatalator().unwrap(), 20.0),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn scaled_parts_reassemble_the_propensities(which in 0usize..8, u in proptest::collection::vec(0.0f64..1.0, 10)) {
        let nets = nets();
        let (net, omega) = &nets[which];
        // random population states inside the bounds, mapped back to DA space
        // by reading them as a population directly
        let lo = net.lower_bounds();
        let hi = net.upper_bounds();
        let x: Vec<f64> = (0..net.n_species()).map(|n| {
            let (a, b) = (lo[n] as f64, (hi[n] as f64).min(lo[n] as f64 + 200.0));
            (a + u[n] * (b - a)).round()
        }).collect();
        let scaled = scaled_propensities(net, *omega).unwrap();
        let xt: Vec<f64> = x.iter().map(|v| v / omega).collect();
        let lead = scaled.density_propensities(&xt);
        let corr = scaled.correction_propensities(&xt);
        let direct = net.propensities_real(&x);
        for m in 0..net.n_reactions() {
            let re = scaled.factor() * (lead[m] + corr[m] / omega);
            let scale = direct[m].abs().max(scaled.factor() * lead[m].abs()).max(1e-300);
            prop_assert!((re - direct[m]).abs() <= 1e-9 * scale, "reaction {m}: {re} vs {}", direct[m]);
        }
    }

    #[test]
    fn noise_covariance_stays_psd_when_stable(kb in 1.0f64..50.0, kd in 0.1f64..2.0, omega in 1.0f64..50.0) {
        let net = ReactionNetwork::new(
            vec![mrn_network::Species::new("X", 0, 1_000_000, 0), mrn_network::Species::new("Y", 0, 1_000_000, 0)],
            vec![
                mrn_network::Reaction { name: String::new(), reactants: vec![0, 0], products: vec![1, 0], propensity: mrn_network::Propensity::MassAction { k: kb } },
                mrn_network::Reaction { name: String::new(), reactants: vec![1, 0], products: vec![0, 1], propensity: mrn_network::Propensity::MassAction { k: kd } },
                mrn_network::Reaction { name: String::new(), reactants: vec![0, 1], products: vec![0, 0], propensity: mrn_network::Propensity::MassAction { k: 0.5 * kd } },
            ],
            vec![],
        ).unwrap();
        let sol = integrate_lna_covariance(&net, omega, &[0.5, 2.0, 10.0], &LnaOptions::default()).unwrap();
        let v = check_lna_validity(&net, &sol);
        prop_assert!(v.stable());
        prop_assert!(v.min_covariance_eigenvalue >= -1e-8);
        for s in &sol.states {
            for a in 0..3 {
                for b in 0..3 {
                    prop_assert_eq!(s.cov_xi[a * 3 + b], s.cov_xi[b * 3 + a]);
                }
            }
        }
    }
}
