//! Multiscale reduction of stiff reaction networks.
//!
//! The reactions are split into a slow set `M_s` and a fast set `M_f`
//! ([`MultiscalePartition`]). Between slow events the fast subsystem is
//! assumed to relax to its quasi-equilibrium, so the slow DAs follow a
//! master equation whose propensities are the conditional means of the
//! original propensities given the slow state ([`reduce_network`]).
//! Conditional fast moments come from a [`FastClosure`]:
//!
//! * [`DimerClosure`]: the analytic quasi-equilibrium of a fast reversible
//!   dimerization ([`dimer_equilibrium_closure`]);
//! * [`StationaryClosure`]: the exact stationary law of the fast subsystem;
//! * [`NestedSsaClosure`]: a long simulation of the isolated fast subsystem.
//!
//! [`simulate_reduced_ensemble`] samples the reduced system with the same
//! reproducible stream policy as the exact samplers, and
//! [`estimate_population_from_slow`] maps slow DAs back to populations.

mod closure;
mod diagnostics;
mod error;
mod partition;
mod reduce;
mod simulate;

pub use closure::{
    dimer_coefficients, dimer_equilibrium_closure, fast_class_seed, DimerClosure, FastClosure, FastMoments,
    NestedSsaClosure, StationaryClosure,
};
pub use diagnostics::{measure_speedup, propensity_ranking, ReactionActivity, SpeedupReport};
pub use error::MultiscaleError;
pub use partition::{ClosureKind, MultiscalePartition};
pub use reduce::{estimate_population_from_slow, reduce_network, ReducedNetwork, SlowPropensities};
pub use simulate::{run_reduced_ssa, simulate_reduced, simulate_reduced_ensemble, ReducedOutcome, ReducedTrajectory};

use mrn_network::ReactionNetwork;

/// Builds the closure named by `kind` for `partition`.
pub fn make_closure(
    kind: ClosureKind,
    net: &ReactionNetwork,
    partition: &MultiscalePartition,
    seed: u64,
) -> Result<Box<dyn FastClosure>, MultiscaleError> {
    Ok(match kind {
        ClosureKind::Dimer => Box::new(DimerClosure::from_network(net, partition)?),
        ClosureKind::Stationary => Box::new(StationaryClosure::new(net, partition)?),
        ClosureKind::NestedSsa => Box::new(NestedSsaClosure::new(net, partition, seed)?),
    })
}
