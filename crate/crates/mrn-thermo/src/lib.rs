//! Thermodynamics of reaction networks on a finite population state space.
//!
//! States are joined by one edge per reversible reaction pair and
//! transition. Under a distribution `p` each edge carries the net flux
//! `ρ = π_fwd(x)p(x) − π_bwd(x′)p(x′)` and the affinity
//! `A = ln[π_fwd(x)p(x) / π_bwd(x′)p(x′)]`, from which
//!
//! * the entropy production rate `σ = Σ ρA ≥ 0`,
//! * the heat dissipation rate `h = Σ ρ ln(π_fwd/π_bwd)`,
//! * the motive-force rate `f = Σ ρĀ` with the stationary affinities `Ā`,
//!
//! satisfy `dS/dt = σ − h` and `dF/dt = f − σ ≤ 0`. State energies are
//! `E(x) = −Ω⁻¹ ln p̄(x)`, so that `F` is the relative entropy of `p` to the
//! stationary distribution (divided by `Ω`).
//!
//! Irreversible reactions are treated as paired with a reverse reaction of
//! vanishing propensity: propensities are floored at `ε` inside logarithms
//! only, and results that depend on `ε` are flagged.
//!
//! The crate also checks detailed balance, builds equilibrium distributions
//! from spanning-tree path products, decomposes cycle affinities over the
//! fundamental cycles of a spanning forest, and extracts energy landscapes.

mod balance;
mod cycles;
mod error;
mod graph;
mod landscape;
mod report;

pub use balance::{
    detailed_balance_check, equilibrium_distribution_by_paths, equilibrium_distribution_of, BalanceMode,
    BalanceReport, TreeKind, BALANCE_TOL,
};
pub use cycles::{Cycle, CycleEdge, CycleGraph, Step};
pub use error::ThermoError;
pub use graph::{reaction_pairs, Edge, EdgeFlux, ReactionPair, ThermoGraph, ThermoOptions, NORMALIZATION_TOL};
pub use landscape::{richardson_v0, state_energy_landscape, EnergyLandscape};
pub use report::{thermo_rates, thermo_run, thermo_timeseries, ThermoRates, ThermoReport, ThermoRun};

/// Cycle graph of `net` over `space`.
pub fn fundamental_cycle_analysis(
    net: &mrn_network::ReactionNetwork,
    space: &mrn_statespace::StateSpace,
    opts: &ThermoOptions,
) -> Result<(ThermoGraph, CycleGraph), ThermoError> {
    let graph = ThermoGraph::new(net, space, opts)?;
    let cycles = CycleGraph::new(&graph);
    Ok((graph, cycles))
}
