mod common;

use approx::assert_relative_eq;
use common::*;
use mrn_network::{ReactionNetwork, Species};
use mrn_statespace::{enumerate_state_space, KsaOptions, SpaceOptions};
use mrn_thermo::*;

fn grid(dt: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| dt * i as f64).collect()
}

#[test]
fn uniform_distribution_has_flat_landscape() {
    let p = vec![0.25; 4];
    let l = state_energy_landscape(&p, 1.0).unwrap();
    assert!(l.potential.iter().all(|v| v.abs() < 1e-15));
    assert_relative_eq!(l.partition, 4.0);
    assert!(l.energy.iter().all(|e| (e - 4f64.ln()).abs() < 1e-15));
}

#[test]
fn landscape_reconstructs_distribution() {
    let p = [0.1, 0.4, 0.3, 0.2, 0.0];
    for omega in [1.0, 3.5] {
        let l = state_energy_landscape(&p, omega).unwrap();
        assert_eq!(l.ground_state, 1);
        assert_eq!(l.potential[1], 0.0);
        assert!(l.potential.iter().all(|v| *v >= 0.0));
        assert_eq!(l.energy[4], f64::INFINITY);
        assert!(l.reconstruction_error(&p) < 1e-12);
    }
}

#[test]
fn landscape_rejects_unnormalized_input() {
    assert!(matches!(state_energy_landscape(&[0.5, 0.6], 1.0), Err(ThermoError::NotNormalized { .. })));
    assert!(state_energy_landscape(&[0.5, -0.5, 1.0], 1.0).is_err());
    assert!(state_energy_landscape(&[1.0], 0.0).is_err());
}

#[test]
fn richardson_recovers_exact_leading_term() {
    // V(Ω) = 2 + 3/Ω
    let v = |o: f64| 2.0 + 3.0 / o;
    assert_relative_eq!(richardson_v0(v(10.0), 10.0, v(40.0), 40.0).unwrap(), 2.0, epsilon = 1e-12);
    assert!(richardson_v0(1.0, 2.0, 1.0, 2.0).is_err());
}

#[test]
fn two_state_is_balanced() {
    let (_, graph, p) = setup(&two_state(2.0, 3.0));
    assert_eq!(graph.edges().len(), 1);
    let by_dist = detailed_balance_check(&graph, Some(&p)).unwrap();
    assert!(by_dist.balanced, "{by_dist:?}");
    let by_prop = detailed_balance_check(&graph, None).unwrap();
    assert!(by_prop.balanced);
    assert_eq!(by_prop.checked, 0);
    let eq = equilibrium_distribution_by_paths(&graph, 0, TreeKind::BreadthFirst).unwrap();
    // states are ordered by enumeration; compare against the stationary solve
    assert!(total_variation(&eq, &p) < 1e-12);
    let a = eq.iter().copied().fold(0.0, f64::max);
    assert_relative_eq!(a, 0.6, epsilon = 1e-12);
}

#[test]
fn driven_three_cycle_product_is_eight() {
    let net = triangle(1, [2.0, 1.0, 2.0, 1.0, 2.0, 1.0]);
    let (space, graph, p) = setup(&net);
    let cg = CycleGraph::new(&graph);
    assert_eq!(cg.fundamental_cycles().len(), 1);
    let start = space.index_of(&[1, 0, 0]).unwrap();
    let c = cg.cycle_from_reactions(&graph, start, &[0, 2, 4]).unwrap();
    assert_relative_eq!(cg.product(&c), 8.0, epsilon = 1e-12);
    let back = cg.cycle_from_reactions(&graph, start, &[5, 3, 1]).unwrap();
    assert_relative_eq!(cg.product(&back), 0.125, epsilon = 1e-12);
    assert_relative_eq!(cg.affinity(&cg.fundamental_cycles()[0]).abs(), 8f64.ln(), epsilon = 1e-12);
    assert_eq!(cg.coefficients(&c).iter().map(|a| a.abs()).sum::<i64>(), 1);
    assert!(cg.reconstruction_error(&c) < 1e-12);

    let report = detailed_balance_check(&graph, None).unwrap();
    assert!(!report.balanced);
    assert_relative_eq!(report.max_violation, 8f64.ln(), epsilon = 1e-12);
    assert!(!detailed_balance_check(&graph, Some(&p)).unwrap().balanced);
    assert!(matches!(
        equilibrium_distribution_by_paths(&graph, 0, TreeKind::BreadthFirst),
        Err(ThermoError::NotBalanced(_))
    ));
}

#[test]
fn invalid_cycles_are_rejected() {
    let net = triangle(1, [2.0, 1.0, 2.0, 1.0, 2.0, 1.0]);
    let (space, graph, _) = setup(&net);
    let cg = CycleGraph::new(&graph);
    let start = space.index_of(&[1, 0, 0]).unwrap();
    // open walk
    assert!(matches!(cg.cycle_from_reactions(&graph, start, &[0, 2]), Err(ThermoError::InvalidCycle(_))));
    // reaction that cannot fire from A
    assert!(cg.cycle_from_reactions(&graph, start, &[2]).is_err());
}

#[test]
fn birth_death_matches_closed_form() {
    let (n, kb, kd) = (12, 1.3, 0.7);
    let net = birth_death(n, kb, kd);
    let (space, graph, p_gth) = setup(&net);
    // p̄(x) ∝ Π_{i<x} κ_b(i)/κ_d(i+1) with κ_b(i) = kb (n − i), κ_d(i) = kd i
    let mut closed = vec![0.0; space.len()];
    let mut w = 1.0;
    for x in 0..=n {
        if x > 0 {
            w *= kb * (n - x + 1) as f64 / (kd * x as f64);
        }
        closed[space.index_of(&[n - x, x]).unwrap()] = w;
    }
    let z: f64 = closed.iter().sum();
    closed.iter_mut().for_each(|v| *v /= z);
    let root = space.index_of(&net.x0()).unwrap();
    for tree in [TreeKind::BreadthFirst, TreeKind::DepthFirst] {
        let p = equilibrium_distribution_by_paths(&graph, root, tree).unwrap();
        let err = p.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13, "{tree:?}: {err}");
    }
    assert!(total_variation(&p_gth, &closed) < 1e-9);
    assert!(detailed_balance_check(&graph, Some(&p_gth)).unwrap().balanced);
    assert_eq!(CycleGraph::new(&graph).fundamental_cycles().len(), 0);
}

#[test]
fn balanced_triangle_paths_agree_with_stationary_solve() {
    let k = balanced_rates([1.0, 2.5, 0.4, 1.7, 3.0]);
    let net = triangle(6, k);
    let (_, graph, p) = setup(&net);
    let report = detailed_balance_check(&graph, None).unwrap();
    assert!(report.balanced, "{report:?}");
    assert!(report.checked > 0);
    let bfs = equilibrium_distribution_by_paths(&graph, 0, TreeKind::BreadthFirst).unwrap();
    let dfs = equilibrium_distribution_by_paths(&graph, 5, TreeKind::DepthFirst).unwrap();
    assert!(total_variation(&bfs, &dfs) < 1e-12);
    assert!(total_variation(&bfs, &p) < 1e-9);
    let (_, via_net) = equilibrium_distribution_of(&net, &ThermoOptions::default()).unwrap();
    assert!(total_variation(&via_net, &p) < 1e-9);
}

#[test]
fn cycle_counts_follow_graph_topology() {
    // chain: a tree
    let (_, graph, _) = setup(&birth_death(5, 1.0, 1.0));
    let cg = CycleGraph::new(&graph);
    assert_eq!((cg.edges().len(), cg.n_nodes(), cg.n_components()), (5, 6, 1));
    assert!(cg.fundamental_cycles().is_empty());
    // 2×2 lattice
    let (_, graph, _) = setup(&two_switches());
    let cg = CycleGraph::new(&graph);
    assert_eq!((cg.edges().len(), cg.n_nodes()), (4, 4));
    assert_eq!(cg.fundamental_cycles().len(), 1);
    assert_eq!(cg.fundamental_cycles()[0].steps.len(), 4);
    // independent switches are balanced
    assert!(detailed_balance_check(&graph, None).unwrap().balanced);
}

#[test]
fn disconnected_graph_is_handled_per_component() {
    let edges = vec![
        CycleEdge { graph_edge: 0, pair: 0, tail: 0, head: 1, log_ratio: 0.3 },
        CycleEdge { graph_edge: 1, pair: 1, tail: 1, head: 2, log_ratio: -0.1 },
        CycleEdge { graph_edge: 2, pair: 2, tail: 2, head: 0, log_ratio: 0.5 },
        CycleEdge { graph_edge: 3, pair: 0, tail: 3, head: 4, log_ratio: 1.0 },
        CycleEdge { graph_edge: 4, pair: 1, tail: 3, head: 4, log_ratio: 2.0 },
    ];
    let cg = CycleGraph::from_edges(6, edges);
    assert_eq!(cg.n_components(), 3);
    assert_eq!(cg.fundamental_cycles().len(), 5 + 3 - 6);
    for c in cg.fundamental_cycles() {
        cg.validate(c).unwrap();
    }
}

#[test]
fn unpaired_reactions_need_permission() {
    let species = vec![Species::new("A", 0, 3, 3), Species::new("B", 0, 3, 0)];
    let net = ReactionNetwork::new(species, vec![reaction(&[1, 0], &[0, 1], 1.0)], vec![]).unwrap();
    let space = enumerate_state_space(&net, &SpaceOptions::population()).unwrap();
    let strict = ThermoOptions { allow_unpaired: false, ..ThermoOptions::default() };
    assert!(matches!(ThermoGraph::new(&net, &space, &strict), Err(ThermoError::MissingPairing(0))));
    let graph = ThermoGraph::new(&net, &space, &ThermoOptions::default()).unwrap();
    assert!(graph.edges().iter().all(|e| e.backward_rate == 0.0));
    assert!(!detailed_balance_check(&graph, None).unwrap().balanced);
}

#[test]
fn irreversible_decay_is_flagged_epsilon_sensitive() {
    let species = vec![Species::new("A", 0, 3, 3), Species::new("B", 0, 3, 0)];
    let reactions = vec![reaction(&[1, 0], &[0, 1], 1.0), reaction(&[0, 1], &[0, 0], 0.5)];
    let net = ReactionNetwork::new(species, reactions, vec![]).unwrap();
    let space = enumerate_state_space(&net, &SpaceOptions::population()).unwrap();
    let graph = ThermoGraph::new(&net, &space, &ThermoOptions::default()).unwrap();
    let mut p = vec![0.0; space.len()];
    p[space.index_of(&[3, 0]).unwrap()] = 1.0;
    let p_bar = {
        let mut v = vec![0.0; space.len()];
        v[space.index_of(&[0, 0]).unwrap()] = 1.0;
        v
    };
    let r = thermo_timeseries(&graph, &[0.0], &[p], &p_bar).unwrap();
    assert!(r.epsilon_sensitive);
    assert!(r.sigma[0] > 0.0);
}

#[test]
fn detailed_balance_gives_zero_rates_at_stationarity() {
    let net = triangle(5, balanced_rates([1.0, 2.0, 0.5, 1.5, 0.8]));
    let (_, graph, p) = setup(&net);
    let r = thermo_rates(&graph, &p, &p).unwrap();
    let scale = 1e-12;
    assert!(r.sigma.abs() < scale && r.h.abs() < scale && r.f.abs() < scale, "{r:?}");
}

#[test]
fn balance_laws_hold_along_solver_trajectory() {
    let net = triangle(8, [1.0, 0.5, 2.0, 0.3, 1.2, 0.4]);
    let ksa = KsaOptions { tol: 1e-12, ..KsaOptions::default() };
    // start past the initial layer, where dS/dt diverges like −ln t
    let times: Vec<f64> = grid(0.005, 400).iter().map(|t| 0.5 + t).collect();
    let run = thermo_run(&net, &times, &ThermoOptions::default(), &ksa).unwrap();
    let r = &run.report;
    assert!(!r.epsilon_sensitive);
    // central differences are second order in the grid spacing
    assert!(r.entropy_balance_residual < 1e-3, "{}", r.entropy_balance_residual);
    assert!(r.free_energy_balance_residual < 1e-3, "{}", r.free_energy_balance_residual);
    for i in 0..r.len() {
        assert!((r.free_energy[i] - (r.energy[i] - r.entropy[i])).abs() < 1e-10);
        assert!(r.sigma[i] >= -1e-10 && r.f[i] >= -1e-10 && r.f[i] <= r.sigma[i] + 1e-10);
        assert!(r.free_energy[i] >= -1e-10);
        if i > 0 {
            assert!(r.free_energy[i] - r.free_energy[i - 1] <= 1e-7);
        }
    }
    // a driven cycle keeps producing entropy at stationarity
    let s = r.stationary;
    assert!(s.sigma > 1e-3);
    assert!((s.sigma - s.h).abs() < 1e-8 * s.sigma.max(1.0));
    assert!((s.sigma - s.f).abs() < 1e-8 * s.sigma.max(1.0));
}

#[test]
fn omega_scales_energy_and_free_energy() {
    let net = triangle(4, [1.0, 0.5, 2.0, 0.3, 1.2, 0.4]);
    let times = grid(0.1, 10);
    let a = thermo_run(&net, &times, &ThermoOptions::default(), &KsaOptions::default()).unwrap().report;
    let opts = ThermoOptions { omega: 4.0, ..ThermoOptions::default() };
    let b = thermo_run(&net, &times, &opts, &KsaOptions::default()).unwrap().report;
    for i in 0..a.len() {
        assert_relative_eq!(b.energy[i] * 4.0, a.energy[i], max_relative = 1e-12);
        assert_relative_eq!(b.free_energy[i] * 4.0, a.free_energy[i], max_relative = 1e-9, epsilon = 1e-14);
        assert_relative_eq!(b.sigma[i], a.sigma[i], max_relative = 1e-12);
    }
}

#[test]
fn timeseries_input_validation() {
    let (_, graph, p) = setup(&two_state(1.0, 1.0));
    assert!(thermo_timeseries(&graph, &[0.0, 1.0], std::slice::from_ref(&p), &p).is_err());
    assert!(thermo_timeseries(&graph, &[1.0, 1.0], &[p.clone(), p.clone()], &p).is_err());
    assert!(matches!(
        thermo_timeseries(&graph, &[0.0], &[vec![0.7, 0.7]], &p),
        Err(ThermoError::NotNormalized { .. })
    ));
}
