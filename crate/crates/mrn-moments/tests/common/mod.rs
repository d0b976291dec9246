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

/// ∅ → X at constant rate `k`.
pub fn immigration(k: f64) -> ReactionNetwork {
    ReactionNetwork::new(vec![Species::new("X", 0, 10_000_000, 0)], vec![reaction(&[0], &[1], k)], vec![]).unwrap()
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

/// 2X → ∅ starting from `n` molecules.
pub fn dimer_decay(n: i64, k: f64) -> ReactionNetwork {
    ReactionNetwork::new(vec![Species::new("X", 0, n, n)], vec![reaction(&[2], &[0], k)], vec![]).unwrap()
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

/// Population mean and covariance (row-major) of a distribution over states.
pub fn moments_of(states: &[Vec<i64>], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = states[0].len();
    let mut mean = vec![0.0; n];
    for (s, w) in states.iter().zip(p) {
        for i in 0..n {
            mean[i] += w * s[i] as f64;
        }
    }
    let mut cov = vec![0.0; n * n];
    for (s, w) in states.iter().zip(p) {
        for i in 0..n {
            for j in 0..n {
                cov[i * n + j] += w * (s[i] as f64 - mean[i]) * (s[j] as f64 - mean[j]);
            }
        }
    }
    (mean, cov)
}
