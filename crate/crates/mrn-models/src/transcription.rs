//! Transcription regulation: translation, fast reversible protein
//! dimerization, two-site promoter binding, transcription and degradation.
//!
//! Species: X1 mRNA, X2 protein, X3 dimer, X4 free gene, X5 gene with one
//! bound dimer, X6 gene with two bound dimers.

use mrn_network::{NetworkError, Propensity, ReactionNetwork, Species};

use crate::reaction;

/// κ₁ … κ₁₀ (s⁻¹).
pub const KAPPA: [f64; 10] = [0.043, 0.083, 0.5, 0.0199, 0.4791, 1.9926e-4, 8.7658e-12, 0.0715, 0.0039, 0.0007];

/// Two mRNA molecules, two copies of the gene, four dimers.
pub const X0: [i64; 6] = [0, 2, 4, 2, 0, 0];

/// Indices (0-based) of the fast dimerization pair.
pub const FAST_REACTIONS: [usize; 2] = [1, 2];

pub fn network() -> Result<ReactionNetwork, NetworkError> {
    network_with(&KAPPA)
}

pub fn network_with(k: &[f64; 10]) -> Result<ReactionNetwork, NetworkError> {
    let cap = 100_000;
    let species = vec![
        Species::new("X1", 0, cap, X0[0]),
        Species::new("X2", 0, cap, X0[1]),
        Species::new("X3", 0, cap, X0[2]),
        Species::new("X4", 0, 2, X0[3]),
        Species::new("X5", 0, 2, X0[4]),
        Species::new("X6", 0, 2, X0[5]),
    ];
    let m = |k: f64| Propensity::MassAction { k };
    let reactions = vec![
        reaction("translation", &[1, 0, 0, 0, 0, 0], &[1, 1, 0, 0, 0, 0], m(k[0])),
        reaction("dimerization", &[0, 2, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], m(k[1])),
        reaction("dissociation", &[0, 0, 1, 0, 0, 0], &[0, 2, 0, 0, 0, 0], m(k[2])),
        reaction("binding_1", &[0, 0, 1, 1, 0, 0], &[0, 0, 0, 0, 1, 0], m(k[3])),
        reaction("unbinding_1", &[0, 0, 0, 0, 1, 0], &[0, 0, 1, 1, 0, 0], m(k[4])),
        reaction("binding_2", &[0, 0, 1, 0, 1, 0], &[0, 0, 0, 0, 0, 1], m(k[5])),
        reaction("unbinding_2", &[0, 0, 0, 0, 0, 1], &[0, 0, 1, 0, 1, 0], m(k[6])),
        reaction("transcription", &[0, 0, 0, 0, 1, 0], &[1, 0, 0, 0, 1, 0], m(k[7])),
        reaction("mrna_degradation", &[1, 0, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 0], m(k[8])),
        reaction("protein_degradation", &[0, 1, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 0], m(k[9])),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![(1, 2), (3, 4), (5, 6)])?.with_time_unit("s"))
}
