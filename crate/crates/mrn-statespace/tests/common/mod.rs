#![allow(dead_code)]

use mrn_network::{Propensity, Reaction, ReactionNetwork, Species};

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

/// A → B with `n` molecules.
pub fn irreversible(n: i64) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, n, n), Species::new("B", 0, n, 0)];
    ReactionNetwork::new(species, vec![reaction(&[1, 0], &[0, 1], 1.0)], vec![]).unwrap()
}

/// One molecule hopping around a directed 3-cycle A → B → C → A.
pub fn three_cycle(k: f64) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, 1, 1), Species::new("B", 0, 1, 0), Species::new("C", 0, 1, 0)];
    let reactions = vec![
        reaction(&[1, 0, 0], &[0, 1, 0], k),
        reaction(&[0, 1, 0], &[0, 0, 1], k),
        reaction(&[0, 0, 1], &[1, 0, 0], k),
    ];
    ReactionNetwork::new(species, reactions, vec![]).unwrap()
}

pub fn sir_from(x0: [i64; 3], k1: f64, k2: f64) -> ReactionNetwork {
    let total = x0.iter().sum::<i64>();
    let species = vec![
        Species::new("S", 0, total, x0[0]),
        Species::new("I", 0, total, x0[1]),
        Species::new("R", 0, total, x0[2]),
    ];
    let reactions = vec![reaction(&[1, 1, 0], &[0, 2, 0], k1), reaction(&[0, 1, 0], &[0, 0, 1], k2)];
    ReactionNetwork::new(species, reactions, vec![]).unwrap()
}

/// Reversible conversion A ⇄ B plus immigration/death of A, bounded.
pub fn open_pair(n: i64, k: [f64; 4]) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, n, 0), Species::new("B", 0, n, 0)];
    let reactions = vec![
        reaction(&[0, 0], &[1, 0], k[0]),
        reaction(&[1, 0], &[0, 0], k[1]),
        reaction(&[1, 0], &[0, 1], k[2]),
        reaction(&[0, 1], &[1, 0], k[3]),
    ];
    ReactionNetwork::new(species, reactions, vec![(0, 1), (2, 3)]).unwrap()
}

pub fn delta(n: usize, i: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[i] = 1.0;
    p
}

pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
