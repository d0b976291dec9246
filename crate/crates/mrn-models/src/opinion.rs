//! Opinion formation with public (`x₁`) and private (`x₂`) net opinions,
//! `−L ≤ x₁, x₂ ≤ L`:
//!
//! ```text
//! π₁ = κ₁(L − x₁) exp( a₁x₁ + a₂x₂)    π₂ = κ₁(L + x₁) exp(−a₁x₁ − a₂x₂)
//! π₃ = κ₂(L − x₂) exp( a₃x₁)           π₄ = κ₂(L + x₂) exp(−a₃x₁)
//! ```

use mrn_network::{NetworkError, Propensity, ReactionNetwork, Species};

use crate::reaction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpinionParams {
    /// Half the number of individuals.
    pub l: i64,
    pub k1: f64,
    pub k2: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl OpinionParams {
    /// No pressure on public opinion, affirmative private bias.
    pub fn liberal() -> Self {
        OpinionParams { l: 40, k1: 0.5, k2: 1.0, a1: 0.0, a2: 1.0 / 80.0, a3: 1.0 / 80.0 }
    }

    /// Heavy pressure on public opinion, weakly dissident private bias.
    pub fn totalitarian() -> Self {
        OpinionParams { l: 40, k1: 0.5, k2: 1.0, a1: 3.0 / 80.0, a2: 1.0 / 40.0, a3: -1.0 / 320.0 }
    }
}

pub fn network(p: &OpinionParams) -> Result<ReactionNetwork, NetworkError> {
    let l = p.l as f64;
    let species = vec![Species::new("x1", -p.l, p.l, 0), Species::new("x2", -p.l, p.l, 0)];
    let op = |k: f64, target: usize, up: bool, a: [f64; 2]| Propensity::OpinionExp { k, l, target, up, a: a.to_vec() };
    let reactions = vec![
        reaction("public_for", &[1, 1], &[2, 1], op(p.k1, 0, true, [p.a1, p.a2])),
        reaction("public_against", &[1, 1], &[0, 1], op(p.k1, 0, false, [p.a1, p.a2])),
        reaction("private_for", &[1, 1], &[1, 2], op(p.k2, 1, true, [p.a3, 0.0])),
        reaction("private_against", &[1, 1], &[1, 0], op(p.k2, 1, false, [p.a3, 0.0])),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![(0, 1), (2, 3)])?.with_time_unit("day"))
}
