use mrn_network::ReactionNetwork;

use crate::MultiscaleError;

/// Closure used to supply conditional moments of the fast subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureKind {
    /// Analytic quasi-equilibrium of a fast reversible dimerization.
    Dimer,
    /// Exact stationary law of the fast subsystem (enumerated state space).
    Stationary,
    /// Long-run time average of a nested fast-subsystem simulation.
    NestedSsa,
}

impl ClosureKind {
    pub fn name(self) -> &'static str {
        match self {
            ClosureKind::Dimer => "dimer",
            ClosureKind::Stationary => "stationary",
            ClosureKind::NestedSsa => "ssa-nested",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "dimer" => Some(ClosureKind::Dimer),
            "stationary" => Some(ClosureKind::Stationary),
            "ssa-nested" | "nested-ssa" => Some(ClosureKind::NestedSsa),
            _ => None,
        }
    }
}

/// Disjoint split of the reactions into a slow set `M_s` and a fast set `M_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiscalePartition {
    slow: Vec<usize>,
    fast: Vec<usize>,
    n_species: usize,
    /// Species changed by at least one fast reaction.
    fast_species: Vec<usize>,
}

impl MultiscalePartition {
    /// Declares `fast` (0-based reaction indices) as the fast set; every other
    /// reaction is slow.
    pub fn new(net: &ReactionNetwork, fast: &[usize]) -> Result<Self, MultiscaleError> {
        let m = net.n_reactions();
        let mut f = fast.to_vec();
        f.sort_unstable();
        if f.windows(2).any(|w| w[0] == w[1]) {
            return Err(MultiscaleError::InvalidPartition("fast set lists a reaction twice".into()));
        }
        if let Some(bad) = f.iter().find(|&&r| r >= m) {
            return Err(MultiscaleError::InvalidPartition(format!("reaction {bad} does not exist ({m} reactions)")));
        }
        if f.len() == m {
            return Err(MultiscaleError::InvalidPartition("the slow set is empty".into()));
        }
        let slow: Vec<usize> = (0..m).filter(|r| f.binary_search(r).is_err()).collect();
        let fast_species = (0..net.n_species()).filter(|&n| f.iter().any(|&r| net.stoich(r)[n] != 0)).collect();
        Ok(MultiscalePartition { slow, fast: f, n_species: net.n_species(), fast_species })
    }

    pub fn slow(&self) -> &[usize] {
        &self.slow
    }

    pub fn fast(&self) -> &[usize] {
        &self.fast
    }

    pub fn is_trivial(&self) -> bool {
        self.fast.is_empty()
    }

    pub fn fast_species(&self) -> &[usize] {
        &self.fast_species
    }

    pub fn is_fast_species(&self, n: usize) -> bool {
        self.fast_species.binary_search(&n).is_ok()
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    /// Population accounted for by the slow reactions alone,
    /// `x₀ + Σ_{m∈M_s} s_m z_m`, where `z_s` lists the slow DAs in the order of
    /// [`Self::slow`]. Fast-affected entries need not lie within bounds.
    pub fn slow_population(&self, net: &ReactionNetwork, z_s: &[u64]) -> Vec<i64> {
        let mut x = net.x0();
        for (&m, &z) in self.slow.iter().zip(z_s) {
            if z > 0 {
                for (xn, s) in x.iter_mut().zip(net.stoich(m)) {
                    *xn += s * z as i64;
                }
            }
        }
        x
    }

    /// The sub-network made of the fast reactions only, started from `x`.
    pub fn fast_subnetwork(&self, net: &ReactionNetwork, x: &[i64]) -> Result<ReactionNetwork, MultiscaleError> {
        if self.fast.is_empty() {
            return Err(MultiscaleError::InvalidPartition("the fast set is empty".into()));
        }
        let mut species = net.species().to_vec();
        for (s, &v) in species.iter_mut().zip(x) {
            s.init = v;
        }
        let reactions = self.fast.iter().map(|&m| net.reactions()[m].clone()).collect();
        let local = |m: usize| self.fast.iter().position(|&f| f == m);
        let pairs = net
            .reversible_pairs()
            .iter()
            .filter_map(|&(a, b)| Some((local(a)?, local(b)?)))
            .collect();
        Ok(ReactionNetwork::new(species, reactions, pairs)?)
    }
}
