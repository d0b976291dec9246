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

/// Fast isomerization A ⇄ B (reactions 0, 1) feeding a slow conversion
/// A → C (reaction 2); `n` molecules start as A.
pub fn isomer_toy(n: i64, kf: f64, kb: f64, k: f64) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, n, n), Species::new("B", 0, n, 0), Species::new("C", 0, n, 0)];
    let reactions = vec![
        reaction(&[1, 0, 0], &[0, 1, 0], kf),
        reaction(&[0, 1, 0], &[1, 0, 0], kb),
        reaction(&[1, 0, 0], &[0, 0, 1], k),
    ];
    ReactionNetwork::new(species, reactions, vec![(0, 1)]).unwrap()
}

/// Same fast pair, but the slow channel is the pairing 2A → C.
pub fn isomer_pairing(n: i64, kf: f64, kb: f64, k: f64) -> ReactionNetwork {
    let species = vec![Species::new("A", 0, n, n), Species::new("B", 0, n, 0), Species::new("C", 0, n, 0)];
    let reactions = vec![
        reaction(&[1, 0, 0], &[0, 1, 0], kf),
        reaction(&[0, 1, 0], &[1, 0, 0], kb),
        reaction(&[2, 0, 0], &[0, 0, 1], k),
    ];
    ReactionNetwork::new(species, reactions, vec![(0, 1)]).unwrap()
}

/// Isolated fast dimerization 2M ⇄ D started from `(m, d)`.
pub fn dimer_pair(m: i64, d: i64, k_dimerize: f64, k_dissociate: f64) -> ReactionNetwork {
    let total = m + 2 * d;
    let species = vec![Species::new("M", 0, total, m), Species::new("D", 0, total / 2, d)];
    let reactions = vec![reaction(&[2, 0], &[0, 1], k_dimerize), reaction(&[0, 1], &[2, 0], k_dissociate)];
    ReactionNetwork::new(species, reactions, vec![(0, 1)]).unwrap()
}

/// Exact stationary mean of the net dimerization count of 2M ⇄ D on the
/// class with `p + 2q` monomer equivalents, by detailed balance.
pub fn exact_dimer_mean(p: i64, q: i64, k_dimerize: f64, k_dissociate: f64) -> f64 {
    let total = p + 2 * q;
    let mut w = vec![1.0f64];
    for d in 0..total / 2 {
        let m = (total - 2 * d) as f64;
        let last = *w.last().unwrap();
        w.push(last * k_dimerize * m * (m - 1.0) / 2.0 / (k_dissociate * (d + 1) as f64));
    }
    let z: f64 = w.iter().sum();
    w.iter().enumerate().map(|(d, v)| d as f64 * v).sum::<f64>() / z - q as f64
}

/// Slow DA vector of the transcription model (slow reactions 1, 4, …, 10
/// in 1-based numbering) with the given populations of mRNA, free gene,
/// singly and doubly bound gene, and with free extra counts elsewhere.
///
/// Returns `[z1, z4, z5, z6, z7, z8, z9, z10]`.
pub fn transcription_slow_da(free_extra: [u64; 5], genes: [i64; 3], mrna: u64) -> [u64; 8] {
    let [z1, z5, z7, z9, z10] = free_extra;
    // x4 = 2 − z4 + z5, x6 = z6 − z7, x1 = z8 − z9
    let z4 = (2 - genes[0] + z5 as i64) as u64;
    let z6 = (genes[2] + z7 as i64) as u64;
    let z8 = mrna + z9;
    [z1, z4, z5, z6, z7, z8, z9, z10]
}

pub fn total_variation(a: &std::collections::BTreeMap<Vec<i64>, f64>, b: &std::collections::BTreeMap<Vec<i64>, f64>) -> f64 {
    let keys: std::collections::BTreeSet<&Vec<i64>> = a.keys().chain(b.keys()).collect();
    0.5 * keys.into_iter().map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs()).sum::<f64>()
}
