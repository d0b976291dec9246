#![allow(dead_code)]

use std::collections::BTreeMap;

use mrn_network::{Propensity, Reaction, ReactionNetwork, Species};

pub fn reaction(reactants: &[u32], products: &[u32], k: f64) -> Reaction {
    Reaction {
        name: String::new(),
        reactants: reactants.to_vec(),
        products: products.to_vec(),
        propensity: Propensity::MassAction { k },
    }
}

/// ∅ → X at constant rate `k`.
pub fn immigration(k: f64) -> ReactionNetwork {
    ReactionNetwork::new(vec![Species::new("X", 0, 10_000_000, 0)], vec![reaction(&[0], &[1], k)], vec![]).unwrap()
}

/// X → ∅ at rate `k x`, starting from `n` molecules.
pub fn decay(n: i64, k: f64) -> ReactionNetwork {
    ReactionNetwork::new(vec![Species::new("X", 0, n, n)], vec![reaction(&[1], &[0], k)], vec![]).unwrap()
}

/// ∅ ⇄ X with birth rate `kb` and death rate `kd x`, starting empty.
pub fn birth_death(kb: f64, kd: f64) -> ReactionNetwork {
    ReactionNetwork::new(
        vec![Species::new("X", 0, 100_000, 0)],
        vec![reaction(&[0], &[1], kb), reaction(&[1], &[0], kd)],
        vec![(0, 1)],
    )
    .unwrap()
}

/// Closed conversion network A ⇄ B ⇄ C ⇄ A with `n` molecules.
pub fn closed_triangle(n: i64, k: [f64; 6]) -> ReactionNetwork {
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

/// Total-variation distance between two sparse distributions.
pub fn tv(a: &BTreeMap<Vec<i64>, f64>, b: &BTreeMap<Vec<i64>, f64>) -> f64 {
    let mut keys: Vec<&Vec<i64>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys.iter().map(|k| (a.get(*k).unwrap_or(&0.0) - b.get(*k).unwrap_or(&0.0)).abs()).sum::<f64>()
}

pub fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

/// `P[Poisson(m) ≥ c]`.
pub fn poisson_tail(m: f64, c: u64) -> f64 {
    let mut term = (-m).exp();
    let mut below = 0.0;
    for k in 0..c {
        below += term;
        term *= m / (k + 1) as f64;
    }
    1.0 - below
}
