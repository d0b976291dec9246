//! Transition graph of a population state space organized by reversible
//! pairs: one edge per pair and state pair `(x, x + s_fwd)`.

use mrn_network::ReactionNetwork;
use mrn_statespace::{SpaceKind, StateSpace};

use crate::ThermoError;

/// Options shared by the thermodynamic computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoOptions {
    /// Size parameter `Ω` in `E(x) = −Ω⁻¹ ln p̄(x)`.
    pub omega: f64,
    /// Floor for vanishing propensities inside logarithms.
    pub epsilon: f64,
    /// Treat a reaction without declared reverse as paired with a reverse of
    /// vanishing propensity (otherwise it is an error).
    pub allow_unpaired: bool,
}

impl Default for ThermoOptions {
    fn default() -> Self {
        ThermoOptions { omega: 1.0, epsilon: 1e-30, allow_unpaired: true }
    }
}

/// A forward reaction and its reverse (absent for irreversible reactions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReactionPair {
    pub forward: usize,
    pub backward: Option<usize>,
}

/// Edge `tail → head = tail + s_fwd` of one reversible pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub pair: usize,
    pub tail: usize,
    pub head: usize,
    /// `π_fwd(x_tail)`.
    pub forward_rate: f64,
    /// `π_bwd(x_head)` (0 for an irreversible reaction).
    pub backward_rate: f64,
}

impl Edge {
    /// Both directions have positive propensity.
    pub fn is_two_sided(&self) -> bool {
        self.forward_rate > 0.0 && self.backward_rate > 0.0
    }
}

/// Net flux and affinity of one edge under a distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFlux {
    /// `ρ = π_fwd(x) p(x) − π_bwd(x′) p(x′)`.
    pub rho: f64,
    /// `A = ln[π_fwd(x) p(x) / π_bwd(x′) p(x′)]`.
    pub affinity: f64,
}

/// Edges of the state graph used by every thermodynamic quantity.
#[derive(Debug, Clone)]
pub struct ThermoGraph {
    pub opts: ThermoOptions,
    pairs: Vec<ReactionPair>,
    edges: Vec<Edge>,
    states: Vec<Vec<i64>>,
    /// Transitions that leave the state space (ignored).
    pub escaping_transitions: usize,
}

/// Accepted deviation of a distribution's mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Smallest probability used inside logarithms (0·ln 0 = 0 otherwise).
const P_FLOOR: f64 = f64::MIN_POSITIVE;

/// Reaction pairs of `net`; forward reactions are the first members of the
/// declared pairs.
pub fn reaction_pairs(net: &ReactionNetwork, allow_unpaired: bool) -> Result<Vec<ReactionPair>, ThermoError> {
    let mut out = Vec::new();
    let mut seen = vec![false; net.n_reactions()];
    for &(a, b) in net.reversible_pairs() {
        if net.stoich(a).iter().zip(net.stoich(b)).any(|(x, y)| x + y != 0) {
            return Err(ThermoError::InvalidPairing(a, b));
        }
        seen[a] = true;
        seen[b] = true;
        out.push(ReactionPair { forward: a, backward: Some(b) });
    }
    for (m, s) in seen.iter().enumerate() {
        if !s {
            if !allow_unpaired {
                return Err(ThermoError::MissingPairing(m));
            }
            out.push(ReactionPair { forward: m, backward: None });
        }
    }
    Ok(out)
}

impl ThermoGraph {
    pub fn new(net: &ReactionNetwork, space: &StateSpace, opts: &ThermoOptions) -> Result<Self, ThermoError> {
        if space.kind() != SpaceKind::Population {
            return Err(ThermoError::InvalidArgument("thermodynamics needs a population state space".into()));
        }
        if !(opts.omega.is_finite() && opts.omega > 0.0) {
            return Err(ThermoError::InvalidArgument(format!("Ω must be positive, got {}", opts.omega)));
        }
        if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) {
            return Err(ThermoError::InvalidArgument(format!("ε must lie in (0, 1), got {}", opts.epsilon)));
        }
        let pairs = reaction_pairs(net, opts.allow_unpaired)?;
        let mut edges = Vec::new();
        let mut escaping = 0;
        let mut target = vec![0i64; net.n_species()];
        for (j, x) in space.states().iter().enumerate() {
            for (k, pair) in pairs.iter().enumerate() {
                let s = net.stoich(pair.forward);
                target.iter_mut().zip(x.iter().zip(s)).for_each(|(t, (a, b))| *t = a + b);
                let forward_rate = net.propensity(pair.forward, x);
                let Some(i) = space.index_of(&target) else {
                    if forward_rate > 0.0 {
                        escaping += 1;
                    }
                    continue;
                };
                let backward_rate = pair.backward.map_or(0.0, |b| net.propensity(b, &target));
                if !(forward_rate.is_finite() && backward_rate.is_finite()) {
                    return Err(ThermoError::InvalidArgument(format!("non-finite propensity at state {x:?}")));
                }
                if forward_rate > 0.0 || backward_rate > 0.0 {
                    edges.push(Edge { pair: k, tail: j, head: i, forward_rate, backward_rate });
                }
            }
        }
        if escaping > 0 {
            log::warn!("{escaping} transitions leave the state space and are ignored by the thermodynamic sums");
        }
        Ok(ThermoGraph { opts: *opts, pairs, edges, states: space.states().to_vec(), escaping_transitions: escaping })
    }

    pub fn pairs(&self) -> &[ReactionPair] {
        &self.pairs
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<i64>] {
        &self.states
    }

    fn floored(&self, r: f64) -> f64 {
        r.max(self.opts.epsilon)
    }

    /// `ln[π_fwd(x)/π_bwd(x′)]` with ε-floored propensities.
    pub fn edge_log_ratio(&self, e: &Edge) -> f64 {
        self.floored(e.forward_rate).ln() - self.floored(e.backward_rate).ln()
    }

    /// Net flux and affinity of every edge under `p`.
    pub fn fluxes(&self, p: &[f64]) -> Vec<EdgeFlux> {
        self.edges
            .iter()
            .map(|e| {
                let (a, b) = (p[e.tail], p[e.head]);
                let rho = e.forward_rate * a - e.backward_rate * b;
                let affinity = self.edge_log_ratio(e) + a.max(P_FLOOR).ln() - b.max(P_FLOOR).ln();
                EdgeFlux { rho, affinity }
            })
            .collect()
    }

    /// Whether any nonzero flux crosses an edge with a one-sided propensity,
    /// so that ε enters the result.
    pub fn epsilon_sensitive(&self, p: &[f64]) -> bool {
        self.edges.iter().any(|e| {
            !e.is_two_sided() && (e.forward_rate * p[e.tail] - e.backward_rate * p[e.head]) != 0.0
        })
    }

    pub(crate) fn check_distribution(&self, p: &[f64]) -> Result<(), ThermoError> {
        if p.len() != self.n_states() {
            return Err(ThermoError::InvalidArgument(format!(
                "distribution has {} entries for {} states",
                p.len(),
                self.n_states()
            )));
        }
        if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(ThermoError::InvalidArgument("probabilities must be finite and nonnegative".into()));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ThermoError::NotNormalized { sum });
        }
        Ok(())
    }

    /// Validated copy of `p` rescaled to unit mass (solver output carries
    /// small mass drift).
    pub(crate) fn normalized(&self, p: &[f64]) -> Result<Vec<f64>, ThermoError> {
        self.check_distribution(p)?;
        let sum: f64 = p.iter().sum();
        Ok(p.iter().map(|v| v / sum).collect())
    }
}
