//! Population model of `L/2` excitatory (`y₁`) and `L/2` inhibitory (`y₂`)
//! neurons:
//!
//! ```text
//! π₁ = (L/2 − y₁)[φ>0] tanh φ    π₂ = γ y₁
//! π₃ = (L/2 − y₂)[φ>0] tanh φ    π₄ = γ y₂      φ = ν_E y₁ + ν_I y₂ + h
//! ```
//!
//! Activation and decay of each population form a reversible pair.

use mrn_network::{NeuralRole, NetworkError, Propensity, ReactionNetwork, Species};

use crate::reaction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuralParams {
    /// Total number of neurons.
    pub l: i64,
    /// Decay rate (ms⁻¹).
    pub gamma: f64,
    /// External input.
    pub h: f64,
    pub nu_e: f64,
    pub nu_i: f64,
}

impl NeuralParams {
    pub fn asynchronous() -> Self {
        NeuralParams { l: 100, gamma: 0.1, h: 0.001, nu_e: 0.034, nu_i: -0.00062 }
    }

    pub fn synchronous() -> Self {
        NeuralParams { l: 100, gamma: 0.1, h: 0.001, nu_e: 0.140, nu_i: -0.136 }
    }

    /// Weights with fixed sum `ν_E + ν_I = sum` and difference `δν = ν_E − ν_I`.
    pub fn with_delta(sum: f64, delta: f64) -> Self {
        NeuralParams { nu_e: 0.5 * (sum + delta), nu_i: 0.5 * (sum - delta), ..Self::asynchronous() }
    }

    pub fn delta_nu(&self) -> f64 {
        self.nu_e - self.nu_i
    }
}

/// Sum of weights used for the avalanche sweep.
pub const WEIGHT_SUM: f64 = 0.004;

/// `δν` values of the avalanche sweep.
pub const DELTA_NU_SWEEP: [f64; 3] = [0.00276, 0.05, 0.276];

pub fn network(p: &NeuralParams) -> Result<ReactionNetwork, NetworkError> {
    let half = p.l / 2;
    let species = vec![Species::new("y1", 0, half, 0), Species::new("y2", 0, half, 0)];
    let weights = vec![p.nu_e, p.nu_i];
    let act = |target: usize| Propensity::NeuralTanh {
        role: NeuralRole::Activation,
        target,
        capacity: half as f64,
        weights: weights.clone(),
        h: p.h,
        gamma: p.gamma,
    };
    let decay = |target: usize| Propensity::NeuralTanh {
        role: NeuralRole::Decay,
        target,
        capacity: half as f64,
        weights: weights.clone(),
        h: p.h,
        gamma: p.gamma,
    };
    let reactions = vec![
        reaction("excitatory_activation", &[1, 1], &[2, 1], act(0)),
        reaction("excitatory_decay", &[1, 0], &[0, 0], decay(0)),
        reaction("inhibitory_activation", &[1, 1], &[1, 2], act(1)),
        reaction("inhibitory_decay", &[0, 1], &[0, 0], decay(1)),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![(0, 1), (2, 3)])?.with_time_unit("ms"))
}
