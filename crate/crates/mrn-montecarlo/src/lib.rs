//! Monte Carlo sampling of reaction networks.
//!
//! * [`simulate_ssa`]: exact trajectories by Gillespie's direct method.
//! * [`simulate_poisson_leap`] and [`simulate_langevin`]: fixed-step
//!   approximations of the degree-of-advancement process.
//! * [`simulate_weighted`]: biased sampling with likelihood-ratio weights for
//!   rare events.
//! * [`simulate_ensemble`] and the estimators in [`stats`]: reproducible
//!   parallel ensembles (one ChaCha8 stream per trajectory) and their
//!   moments and empirical distributions.
//! * [`count_avalanches`]: bursts of activity in piecewise-constant paths.

mod avalanche;
mod ensemble;
mod error;
mod leap;
mod ssa;
pub mod stats;
mod trajectory;

pub use avalanche::{avalanche_rate, count_avalanches, AvalancheCount, AvalancheCounter, AvalancheStatistics};
pub use ensemble::{simulate_ensemble, with_threads, EnsembleOptions, Method, TrajectoryEnsemble};
pub use error::MonteCarloError;
pub use leap::{
    leap_bound, run_langevin, run_poisson_leap, simulate_langevin, simulate_langevin_with, simulate_poisson_leap,
    simulate_poisson_leap_with, LangevinNoise, LeapOptions, TauPolicy,
};
pub use ssa::{run_ssa, simulate_ssa, simulate_ssa_stream, simulate_weighted, SsaOutcome};
pub use stats::{empirical_pmf, estimate_probability, estimate_statistics, EmpiricalPmf, EnsembleStatistics, ProbabilityEstimate};
pub use trajectory::{trajectory_rng, Trajectory, TrajectoryKind};
