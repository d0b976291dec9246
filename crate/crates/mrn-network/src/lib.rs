//! Reaction networks, propensity families and the mapping between the
//! degree-of-advancement (DA) process `z` and the population process
//! `x = x₀ + S z`.
//!
//! A [`ReactionNetwork`] is validated on construction and immutable afterwards,
//! so it can be shared freely between threads.

mod error;
pub mod io;
pub mod jet;
mod network;
pub mod propensity;

pub use error::NetworkError;
pub use jet::{Jet, Scalar};
pub use network::{
    net_stoichiometry, validate_network, IntMatrix, Reaction, ReactionNetwork, Species,
    ValidationReport,
};
pub use propensity::{binomial_f64, binomial_u64, Convexity, NeuralRole, Propensity, Term, TermFn};
