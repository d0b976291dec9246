//! Exact treatment of the master equation on finite state spaces.
//!
//! * [`enumerate_state_space`] builds population or degree-of-advancement (DA)
//!   state spaces by breadth-first closure.
//! * [`build_generator`] assembles the sparse generator (column `j` holds the
//!   rates out of state `j`).
//! * [`propagate_ksa`] (Krylov subspace exponential with automatic step
//!   control) and [`propagate_ie`] (implicit Euler on the lower-triangular DA
//!   generator) propagate probability vectors.
//! * [`stationary_distribution`], [`eigen_solution`] and
//!   [`classify_communicating_structure`] analyse long-time behaviour.

mod classify;
mod eigen;
mod error;
mod generator;
mod implicit;
mod krylov;
mod space;
mod stationary;

pub use classify::{classify_communicating_structure, StateClassification};
pub use eigen::{eigen_solution, EigenSolution};
pub use error::StateSpaceError;
pub use generator::{build_generator, Generator, GeneratorKind, Truncation};
pub use implicit::{default_ie_step, ie_step, propagate_ie};
pub use krylov::{propagate_ksa, propagate_ksa_grid, KsaOptions, MAX_KRYLOV_DIM};
pub use space::{enumerate_state_space, marginalize_da_distribution, SpaceKind, SpaceOptions, StateSpace};
pub use stationary::{kl_divergence, stationary_distribution};

/// A probability vector together with bookkeeping from its computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub t: f64,
    pub p: Vec<f64>,
    /// Negative mass removed by clipping.
    pub clipped_mass: f64,
    /// Mass that left the truncated state space.
    pub lost_mass: f64,
    pub steps: usize,
}
