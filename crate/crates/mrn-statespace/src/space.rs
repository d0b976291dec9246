use std::collections::{HashMap, VecDeque};

use mrn_network::ReactionNetwork;

use crate::StateSpaceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Population,
    /// Degree-of-advancement vectors with at most `horizon` total firings.
    Da { horizon: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceOptions {
    pub kind: SpaceKind,
    pub max_states: usize,
    /// Overrides the species bounds declared by the model.
    pub bounds: Option<Vec<(i64, i64)>>,
}

impl Default for SpaceOptions {
    fn default() -> Self {
        SpaceOptions { kind: SpaceKind::Population, max_states: 2_000_000, bounds: None }
    }
}

impl SpaceOptions {
    pub fn population() -> Self {
        Self::default()
    }

    pub fn da(horizon: u64) -> Self {
        SpaceOptions { kind: SpaceKind::Da { horizon }, ..Self::default() }
    }
}

/// Mixed-radix key of a vector inside an integer box, after shifting every
/// coordinate by its lower bound.
#[derive(Debug, Clone)]
struct BoxKey {
    lo: Vec<i64>,
    radix: Vec<u128>,
}

impl BoxKey {
    fn new(lo: Vec<i64>, hi: &[i64]) -> Result<Self, StateSpaceError> {
        let mut radix = Vec::with_capacity(lo.len());
        let mut total: u128 = 1;
        for (l, h) in lo.iter().zip(hi) {
            radix.push(total);
            let width = (h - l + 1).max(1) as u128;
            total = total.checked_mul(width).ok_or(StateSpaceError::IndexOverflow)?;
        }
        Ok(BoxKey { lo, radix })
    }

    #[inline]
    fn key(&self, v: &[i64]) -> u128 {
        v.iter().zip(&self.lo).zip(&self.radix).map(|((x, l), r)| (x - l) as u128 * r).sum()
    }
}

/// An ordered, indexed finite state space.
#[derive(Debug, Clone)]
pub struct StateSpace {
    kind: SpaceKind,
    states: Vec<Vec<i64>>,
    populations: Option<Vec<Vec<i64>>>,
    lower: Vec<i64>,
    upper: Vec<i64>,
    keys: BoxKey,
    index: HashMap<u128, usize>,
}

impl StateSpace {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Population states, or DA vectors for a DA space.
    pub fn states(&self) -> &[Vec<i64>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[i64] {
        &self.states[i]
    }

    /// Population state associated with index `i` (the state itself in a
    /// population space, `x₀ + S z` in a DA space).
    pub fn population(&self, i: usize) -> &[i64] {
        match &self.populations {
            Some(p) => &p[i],
            None => &self.states[i],
        }
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        if v.len() != self.lower.len() {
            return None;
        }
        if v.iter().zip(&self.lower).zip(&self.upper).any(|((x, l), h)| x < l || x > h) {
            return None;
        }
        self.index.get(&self.keys.key(v)).copied()
    }

    /// Index of the state one firing of reaction `m` away from state `j`.
    pub fn successor(&self, net: &ReactionNetwork, j: usize, m: usize) -> Option<usize> {
        match self.kind {
            SpaceKind::Population => {
                let y: Vec<i64> = self.states[j].iter().zip(net.stoich(m)).map(|(a, b)| a + b).collect();
                self.index_of(&y)
            }
            SpaceKind::Da { .. } => {
                let mut z = self.states[j].clone();
                z[m] += 1;
                self.index_of(&z)
            }
        }
    }
}

fn bounds_of(net: &ReactionNetwork, opts: &SpaceOptions) -> Result<(Vec<i64>, Vec<i64>), StateSpaceError> {
    match &opts.bounds {
        Some(b) => {
            if b.len() != net.n_species() {
                return Err(StateSpaceError::InvalidArgument(format!(
                    "{} bounds given for {} species",
                    b.len(),
                    net.n_species()
                )));
            }
            if b.iter().any(|(l, h)| l > h) {
                return Err(StateSpaceError::InvalidArgument("lower bound above upper bound".into()));
            }
            Ok(b.iter().cloned().unzip())
        }
        None => Ok((net.lower_bounds(), net.upper_bounds())),
    }
}

/// Breadth-first closure from the initial state (or `z = 0`) under every
/// reaction with positive propensity whose result stays in bounds, sorted
/// lexicographically.
pub fn enumerate_state_space(net: &ReactionNetwork, opts: &SpaceOptions) -> Result<StateSpace, StateSpaceError> {
    let (lo, hi) = bounds_of(net, opts)?;
    let x0 = net.x0();
    if x0.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
        return Err(StateSpaceError::InvalidArgument("initial state outside the bounds".into()));
    }
    let in_box = |x: &[i64]| x.iter().zip(lo.iter().zip(&hi)).all(|(v, (l, h))| v >= l && v <= h);
    let m = net.n_reactions();

    match opts.kind {
        SpaceKind::Population => {
            let keys = BoxKey::new(lo.clone(), &hi)?;
            let mut seen: HashMap<u128, ()> = HashMap::new();
            let mut states = Vec::new();
            let mut queue = VecDeque::new();
            seen.insert(keys.key(&x0), ());
            queue.push_back(x0);
            while let Some(x) = queue.pop_front() {
                for r in 0..m {
                    if net.propensity(r, &x) <= 0.0 {
                        continue;
                    }
                    let y: Vec<i64> = x.iter().zip(net.stoich(r)).map(|(a, b)| a + b).collect();
                    if !in_box(&y) {
                        continue;
                    }
                    if seen.insert(keys.key(&y), ()).is_none() {
                        queue.push_back(y);
                    }
                }
                states.push(x);
                if states.len() + queue.len() > opts.max_states {
                    return Err(StateSpaceError::CapExceeded { cap: opts.max_states });
                }
            }
            states.sort();
            let index = states.iter().enumerate().map(|(i, s)| (keys.key(s), i)).collect();
            Ok(StateSpace { kind: opts.kind, states, populations: None, lower: lo, upper: hi, keys, index })
        }
        SpaceKind::Da { horizon } => {
            let h = i64::try_from(horizon).map_err(|_| StateSpaceError::InvalidArgument("horizon too large".into()))?;
            let zl = vec![0i64; m];
            let zh = vec![h; m];
            let keys = BoxKey::new(zl.clone(), &zh)?;
            let mut seen: HashMap<u128, ()> = HashMap::new();
            let mut items: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
            let mut queue = VecDeque::new();
            seen.insert(keys.key(&zl), ());
            queue.push_back((zl.clone(), x0, 0i64));
            while let Some((z, x, total)) = queue.pop_front() {
                if total < h {
                    for r in 0..m {
                        if net.propensity(r, &x) <= 0.0 {
                            continue;
                        }
                        let y: Vec<i64> = x.iter().zip(net.stoich(r)).map(|(a, b)| a + b).collect();
                        if !in_box(&y) {
                            continue;
                        }
                        let mut w = z.clone();
                        w[r] += 1;
                        if seen.insert(keys.key(&w), ()).is_none() {
                            queue.push_back((w, y, total + 1));
                        }
                    }
                }
                items.push((z, x));
                if items.len() + queue.len() > opts.max_states {
                    return Err(StateSpaceError::CapExceeded { cap: opts.max_states });
                }
            }
            items.sort();
            let (states, pops): (Vec<_>, Vec<_>) = items.into_iter().unzip();
            let index = states.iter().enumerate().map(|(i, s)| (keys.key(s), i)).collect();
            Ok(StateSpace { kind: opts.kind, states, populations: Some(pops), lower: zl, upper: zh, keys, index })
        }
    }
}

/// Sums DA probabilities over the preimage `B(x) = {z : x = x₀ + S z}`.
/// Returns the population distribution on `target` and the mass whose
/// population state is missing from `target`.
pub fn marginalize_da_distribution(
    da_space: &StateSpace,
    q: &[f64],
    target: &StateSpace,
) -> Result<(Vec<f64>, f64), StateSpaceError> {
    if !matches!(da_space.kind(), SpaceKind::Da { .. }) || target.kind() != SpaceKind::Population {
        return Err(StateSpaceError::InvalidArgument("expected a DA space and a population space".into()));
    }
    if q.len() != da_space.len() {
        return Err(StateSpaceError::InvalidArgument("distribution length does not match the DA space".into()));
    }
    let mut p = vec![0.0; target.len()];
    let mut lost = 0.0;
    for (i, qi) in q.iter().enumerate() {
        match target.index_of(da_space.population(i)) {
            Some(k) => p[k] += qi,
            None => lost += qi,
        }
    }
    Ok((p, lost))
}
