#![allow(dead_code)]

use mrn_network::{Propensity, Reaction, ReactionNetwork, Species};
use mrn_statespace::{
    build_generator, enumerate_state_space, stationary_distribution, SpaceOptions, StateSpace, Truncation,
};
use mrn_thermo::{ThermoGraph, ThermoOptions};

pub fn reaction(reactants: &[u32], products: &[u32], k: f64) -> Reaction {
    Reaction {
        name: String::new(),
        reactants: reactants.to_vec(),
        products: products.to_vec(),
        propensity: Propensity::MassAction { k },
    }
}

/// A ⇄ B with one molecule.
pub fn two_state(kf: f64, kb: f64) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, 1, 1), Species::new("B", 0, 1, 0)];
    ReactionNetwork::new(species, vec![reaction(&[1, 0], &[0, 1], kf), reaction(&[0, 1], &[1, 0], kb)], vec![(0, 1)])
        .unwrap()
}

/// Closed conversion network A ⇄ B ⇄ C ⇄ A with `n` molecules; the
/// rates `k` are ordered (A→B, B→A, B→C, C→B, C→A, A→C).
pub fn triangle(n: i64, k: [f64; 6]) -> ReactionNetwork {
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

/// Triangle rates satisfying the Kolmogorov condition
/// `k_AB k_BC k_CA = k_BA k_CB k_AC`.
pub fn balanced_rates(k: [f64; 5]) -> [f64; 6] {
    [k[0], k[1], k[2], k[3], k[4], k[0] * k[2] * k[4] / (k[1] * k[3])]
}

/// Birth-death chain on `X ∈ 0..=n` driven by a reservoir `R`:
/// `R → X` at `kb·r`, `X → R` at `kd·x`.
pub fn birth_death(n: i64, kb: f64, kd: f64) -> ReactionNetwork {
    let species = vec![Species::new("R", 0, n, n), Species::new("X", 0, n, 0)];
    ReactionNetwork::new(species, vec![reaction(&[1, 0], &[0, 1], kb), reaction(&[0, 1], &[1, 0], kd)], vec![(0, 1)])
        .unwrap()
}

/// Two independent one-molecule switches A ⇄ B and C ⇄ D (a 2×2 lattice).
pub fn two_switches() -> ReactionNetwork {
    let species = vec![
        Species::new("A", 0, 1, 1),
        Species::new("B", 0, 1, 0),
        Species::new("C", 0, 1, 1),
        Species::new("D", 0, 1, 0),
    ];
    let reactions = vec![
        reaction(&[1, 0, 0, 0], &[0, 1, 0, 0], 1.0),
        reaction(&[0, 1, 0, 0], &[1, 0, 0, 0], 2.0),
        reaction(&[0, 0, 1, 0], &[0, 0, 0, 1], 3.0),
        reaction(&[0, 0, 0, 1], &[0, 0, 1, 0], 4.0),
    ];
    ReactionNetwork::new(species, reactions, vec![(0, 1), (2, 3)]).unwrap()
}

/// Population space, thermodynamic graph and GTH stationary distribution.
pub fn setup(net: &ReactionNetwork) -> (StateSpace, ThermoGraph, Vec<f64>) {
    let space = enumerate_state_space(net, &SpaceOptions::population()).unwrap();
    let gen = build_generator(net, &space, Truncation::Strict).unwrap();
    let p = stationary_distribution(&gen).unwrap();
    let graph = ThermoGraph::new(net, &space, &ThermoOptions::default()).unwrap();
    (space, graph, p)
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
