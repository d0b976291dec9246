//! Detailed-balance tests and the equilibrium distribution obtained from
//! products of propensity ratios along spanning-tree paths.

use std::collections::VecDeque;

use mrn_network::ReactionNetwork;
use mrn_statespace::{enumerate_state_space, SpaceOptions, StateSpace};

use crate::cycles::{CycleGraph, Step};
use crate::graph::{ThermoGraph, ThermoOptions};
use crate::ThermoError;

/// Tolerance on `|ln P(C)|` and on relative flux imbalance.
pub const BALANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceMode {
    /// Compare the fluxes of each pair under a stationary distribution.
    Distribution,
    /// Kolmogorov test: every fundamental cycle product equals one.
    Propensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub mode: BalanceMode,
    pub balanced: bool,
    /// Distribution mode: largest `|π_fwd p̄ − π_bwd p̄′|`; propensity mode:
    /// largest `|ln P(C†_k)|`.
    pub max_violation: f64,
    /// Distribution mode: largest imbalance relative to the larger flux
    /// (equal to `max_violation` in propensity mode).
    pub max_relative_violation: f64,
    /// Edges or fundamental cycles checked.
    pub checked: usize,
    /// Transitions whose reverse has zero propensity; any such transition
    /// between states of positive probability excludes detailed balance.
    pub one_sided: usize,
}

/// Checks detailed balance of the pairs of `graph`, either from the
/// stationary distribution `p_bar` or from propensities alone.
pub fn detailed_balance_check(graph: &ThermoGraph, p_bar: Option<&[f64]>) -> Result<BalanceReport, ThermoError> {
    let one_sided = graph.edges().iter().filter(|e| !e.is_two_sided()).count();
    match p_bar {
        Some(p) => {
            let p = &graph.normalized(p)?;
            let mut max_abs: f64 = 0.0;
            let mut max_rel: f64 = 0.0;
            for e in graph.edges() {
                let (a, b) = (e.forward_rate * p[e.tail], e.backward_rate * p[e.head]);
                let d = (a - b).abs();
                max_abs = max_abs.max(d);
                if d > 0.0 {
                    max_rel = max_rel.max(d / a.max(b));
                }
            }
            Ok(BalanceReport {
                mode: BalanceMode::Distribution,
                balanced: max_rel <= 1e-8,
                max_violation: max_abs,
                max_relative_violation: max_rel,
                checked: graph.edges().len(),
                one_sided,
            })
        }
        None => {
            let cg = CycleGraph::new(graph);
            let worst = cg.fundamental_cycles().iter().map(|c| cg.affinity(c).abs()).fold(0.0, f64::max);
            Ok(BalanceReport {
                mode: BalanceMode::Propensity,
                balanced: worst <= BALANCE_TOL && one_sided == 0,
                max_violation: worst,
                max_relative_violation: worst,
                checked: cg.fundamental_cycles().len(),
                one_sided,
            })
        }
    }
}

/// Spanning-tree traversal order used by
/// [`equilibrium_distribution_by_paths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    BreadthFirst,
    DepthFirst,
}

/// Equilibrium distribution from `p̄(x)/p̄(x₀) = Π π_fwd/π_bwd` along the
/// paths of a spanning tree rooted at `root`, normalized over `graph`'s
/// states. Refuses networks whose fundamental cycles are not balanced.
pub fn equilibrium_distribution_by_paths(
    graph: &ThermoGraph,
    root: usize,
    tree: TreeKind,
) -> Result<Vec<f64>, ThermoError> {
    let n = graph.n_states();
    if root >= n {
        return Err(ThermoError::InvalidArgument(format!("root {root} outside a space of {n} states")));
    }
    let report = detailed_balance_check(graph, None)?;
    if report.one_sided > 0 {
        return Err(ThermoError::NotBalanced(format!("{} transitions have no reverse", report.one_sided)));
    }
    if !report.balanced {
        return Err(ThermoError::NotBalanced(format!(
            "a fundamental cycle has |ln P(C)| = {:.3e}",
            report.max_violation
        )));
    }
    let cg = CycleGraph::new(graph);
    if cg.n_components() != 1 {
        return Err(ThermoError::Disconnected(cg.n_components()));
    }
    let mut adjacency: Vec<Vec<Step>> = vec![Vec::new(); n];
    for (k, e) in cg.edges().iter().enumerate() {
        adjacency[e.tail].push(Step { edge: k, forward: true });
        adjacency[e.head].push(Step { edge: k, forward: false });
    }
    let mut log_p = vec![f64::NAN; n];
    log_p[root] = 0.0;
    let mut frontier = VecDeque::from([root]);
    while let Some(u) = match tree {
        TreeKind::BreadthFirst => frontier.pop_front(),
        TreeKind::DepthFirst => frontier.pop_back(),
    } {
        for s in &adjacency[u] {
            let e = &cg.edges()[s.edge];
            let (v, w) = if s.forward { (e.head, e.log_ratio) } else { (e.tail, -e.log_ratio) };
            if log_p[v].is_nan() {
                log_p[v] = log_p[u] + w;
                frontier.push_back(v);
            }
        }
    }
    let top = log_p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = log_p.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= z);
    Ok(p)
}

/// Equilibrium distribution of `net` over its population space, rooted at
/// the initial state.
pub fn equilibrium_distribution_of(
    net: &ReactionNetwork,
    opts: &ThermoOptions,
) -> Result<(StateSpace, Vec<f64>), ThermoError> {
    let space = enumerate_state_space(net, &SpaceOptions::population())?;
    let graph = ThermoGraph::new(net, &space, opts)?;
    let root = space.index_of(&net.x0()).unwrap_or(0);
    let p = equilibrium_distribution_by_paths(&graph, root, TreeKind::BreadthFirst)?;
    Ok((space, p))
}
