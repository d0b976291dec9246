//! Closures supplying the conditional moments of the fast subsystem given
//! the slow state.
//!
//! Every closure is a function of the slow population `x_s = x₀ + S_s z_s`:
//! once the fast reactions have equilibrated, the conditional law of the
//! population is the stationary law of the fast subsystem on the class
//! `{x_s + S_f z_f}` that contains `x_s`.

use std::collections::HashMap;
use std::sync::Mutex;

use mrn_montecarlo::trajectory_rng;
use mrn_network::{Propensity, ReactionNetwork};
use mrn_statespace::{build_generator, enumerate_state_space, stationary_distribution, SpaceOptions, Truncation};
use rand::Rng;
use rand_distr::Exp1;

use crate::{MultiscaleError, MultiscalePartition};

/// Conditional moments of the fast displacement `Δ = Σ_{m∈M_f} s_m Z_m`
/// given the slow state. The population estimate is `x̂ = x_s + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct FastMoments {
    /// `E[Δ | z_s]`, one entry per species.
    pub shift: Vec<f64>,
    /// `Cov[Δ | z_s]` (row-major `N × N`), when the closure provides it.
    pub cov: Option<Vec<f64>>,
}

/// Source of conditional fast moments. Implementations must be pure
/// functions of the slow population (caching is allowed).
pub trait FastClosure: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether [`FastMoments::cov`] is filled in.
    fn provides_covariance(&self) -> bool;

    /// Moments of the fast displacement given the slow population `x_slow`.
    fn moments(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError>;
}

/// Coefficients `(A, B)` of the quadratic whose smaller root is the
/// equilibrium net number of dimerizations `d = μ_Z(fwd) − μ_Z(bwd)`.
///
/// `monomers` and `dimers` are the slow-accounted counts `P` and `Q`; with
/// `c = κ_dissociate / 2κ_dimerize`, `A = P − ½ + c` and
/// `B = ¼P(P − 1) − cQ`. The root balances the two propensities,
/// `κ_dimerize (P − 2d)(P − 2d − 1)/2 = κ_dissociate (Q + d)`.
pub fn dimer_coefficients(monomers: i64, dimers: i64, k_dimerize: f64, k_dissociate: f64) -> (f64, f64) {
    let (p, q) = (monomers as f64, dimers as f64);
    let c = k_dissociate / (2.0 * k_dimerize);
    (p - 0.5 + c, 0.25 * p * (p - 1.0) - c * q)
}

/// Quasi-equilibrium net dimerization count `½[A − √(A² − 4B)]` of a fast
/// reversible dimerization `2M ⇄ D` (see [`dimer_coefficients`]).
///
/// The discriminant equals `(c − ½)² + 2c(P + 2Q)`, so it is negative only
/// when the slow counts leave fewer than zero monomer equivalents.
pub fn dimer_equilibrium_closure(
    monomers: i64,
    dimers: i64,
    k_dimerize: f64,
    k_dissociate: f64,
) -> Result<f64, MultiscaleError> {
    let fail = |reason: String| MultiscaleError::ClosureFailure { state: vec![monomers, dimers], reason };
    if !(k_dimerize > 0.0 && k_dissociate >= 0.0 && k_dimerize.is_finite() && k_dissociate.is_finite()) {
        return Err(fail(format!("rate constants {k_dimerize}, {k_dissociate} are not admissible")));
    }
    let (a, b) = dimer_coefficients(monomers, dimers, k_dimerize, k_dissociate);
    let disc = a * a - 4.0 * b;
    if !(disc >= 0.0) {
        return Err(fail(format!("negative discriminant A² − 4B = {disc}")));
    }
    let root = disc.sqrt();
    // the rationalized form avoids cancellation when A ≫ |B|
    Ok(if a > 0.0 { 2.0 * b / (a + root) } else { 0.5 * (a - root) })
}

/// Analytic closure for a fast set made of one reversible dimerization
/// `2M → D`, `D → 2M` with mass-action kinetics.
#[derive(Debug, Clone, PartialEq)]
pub struct DimerClosure {
    pub monomer: usize,
    pub dimer: usize,
    pub k_dimerize: f64,
    pub k_dissociate: f64,
    n_species: usize,
}

impl DimerClosure {
    pub fn new(n_species: usize, monomer: usize, dimer: usize, k_dimerize: f64, k_dissociate: f64) -> Self {
        DimerClosure { monomer, dimer, k_dimerize, k_dissociate, n_species }
    }

    /// Recognizes the dimerization pair in the fast set of `partition`.
    pub fn from_network(net: &ReactionNetwork, partition: &MultiscalePartition) -> Result<Self, MultiscaleError> {
        let bad = |why: &str| MultiscaleError::InvalidPartition(format!("dimer closure: {why}"));
        let fast = partition.fast();
        if fast.len() != 2 {
            return Err(bad("the fast set must hold exactly one dimerization and its reverse"));
        }
        let shape = |m: usize| -> Option<(usize, usize, f64)> {
            let r = &net.reactions()[m];
            let Propensity::MassAction { k } = r.propensity else { return None };
            let single = |v: &[u32], c: u32| -> Option<usize> {
                let nz: Vec<usize> = (0..v.len()).filter(|&n| v[n] != 0).collect();
                (nz.len() == 1 && v[nz[0]] == c).then_some(nz[0])
            };
            Some((single(&r.reactants, 2)?, single(&r.products, 1)?, k))
        };
        let undo = |m: usize| -> Option<(usize, usize, f64)> {
            let r = &net.reactions()[m];
            let Propensity::MassAction { k } = r.propensity else { return None };
            let nz = |v: &[u32]| (0..v.len()).filter(|&n| v[n] != 0).collect::<Vec<_>>();
            let (re, pr) = (nz(&r.reactants), nz(&r.products));
            (re.len() == 1 && pr.len() == 1 && r.reactants[re[0]] == 1 && r.products[pr[0]] == 2)
                .then_some((pr[0], re[0], k))
        };
        for (f, b) in [(fast[0], fast[1]), (fast[1], fast[0])] {
            if let (Some((m1, d1, kf)), Some((m2, d2, kb))) = (shape(f), undo(b)) {
                if m1 == m2 && d1 == d2 && m1 != d1 {
                    return Ok(DimerClosure::new(net.n_species(), m1, d1, kf, kb));
                }
            }
        }
        Err(bad("fast reactions are not of the form 2M → D, D → 2M"))
    }

    /// Net dimerization count `d` at the slow population `x_slow`.
    pub fn net_dimerizations(&self, x_slow: &[i64]) -> Result<f64, MultiscaleError> {
        dimer_equilibrium_closure(x_slow[self.monomer], x_slow[self.dimer], self.k_dimerize, self.k_dissociate)
            .map_err(|e| match e {
                MultiscaleError::ClosureFailure { reason, .. } => {
                    MultiscaleError::ClosureFailure { state: x_slow.to_vec(), reason }
                }
                e => e,
            })
    }
}

impl FastClosure for DimerClosure {
    fn name(&self) -> &'static str {
        "dimer"
    }

    fn provides_covariance(&self) -> bool {
        false
    }

    fn moments(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError> {
        let d = self.net_dimerizations(x_slow)?;
        let mut shift = vec![0.0; self.n_species];
        shift[self.monomer] = -2.0 * d;
        shift[self.dimer] = d;
        Ok(FastMoments { shift, cov: None })
    }
}

/// Total violation of the species bounds.
fn violation(net: &ReactionNetwork, x: &[i64]) -> i64 {
    x.iter()
        .zip(net.species())
        .map(|(v, s)| (s.min - v).max(0) + (v - s.max).max(0))
        .sum()
}

/// A population inside the species bounds on the fast class of `x_slow`,
/// found greedily by applying the fast reaction that most reduces the bound
/// violation.
pub fn fast_class_seed(
    net: &ReactionNetwork,
    partition: &MultiscalePartition,
    x_slow: &[i64],
) -> Result<Vec<i64>, MultiscaleError> {
    let mut x = x_slow.to_vec();
    let mut v = violation(net, &x);
    let mut candidate = vec![0i64; x.len()];
    while v > 0 {
        let mut best: Option<(i64, usize)> = None;
        for &m in partition.fast() {
            candidate.iter_mut().zip(&x).zip(net.stoich(m)).for_each(|((c, a), s)| *c = a + s);
            let w = violation(net, &candidate);
            if w < v && best.is_none_or(|(b, _)| w < b) {
                best = Some((w, m));
            }
        }
        let Some((w, m)) = best else {
            return Err(MultiscaleError::ClosureFailure {
                state: x_slow.to_vec(),
                reason: "no fast reaction leads back inside the species bounds".into(),
            });
        };
        x.iter_mut().zip(net.stoich(m)).for_each(|(a, s)| *a += s);
        v = w;
    }
    Ok(x)
}

fn population_moments(states: &[Vec<i64>], p: &[f64], x_slow: &[i64]) -> FastMoments {
    let n = x_slow.len();
    let mut mean = vec![0.0; n];
    for (x, w) in states.iter().zip(p) {
        mean.iter_mut().zip(x).for_each(|(m, v)| *m += w * *v as f64);
    }
    let mut cov = vec![0.0; n * n];
    for (x, w) in states.iter().zip(p) {
        for i in 0..n {
            let di = x[i] as f64 - mean[i];
            for j in 0..n {
                cov[i * n + j] += w * di * (x[j] as f64 - mean[j]);
            }
        }
    }
    let shift = mean.iter().zip(x_slow).map(|(m, x)| m - *x as f64).collect();
    FastMoments { shift, cov: Some(cov) }
}

/// Exact conditional moments from the stationary law of the fast subsystem,
/// computed on its enumerated (finite) state space.
pub struct StationaryClosure {
    net: ReactionNetwork,
    partition: MultiscalePartition,
    pub max_states: usize,
    cache: Mutex<HashMap<Vec<i64>, FastMoments>>,
}

impl StationaryClosure {
    pub fn new(net: &ReactionNetwork, partition: &MultiscalePartition) -> Result<Self, MultiscaleError> {
        if partition.is_trivial() {
            return Err(MultiscaleError::InvalidPartition("the fast set is empty".into()));
        }
        Ok(StationaryClosure {
            net: net.clone(),
            partition: partition.clone(),
            max_states: 10_000,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn compute(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError> {
        let seed = fast_class_seed(&self.net, &self.partition, x_slow)?;
        let sub = self.partition.fast_subnetwork(&self.net, &seed)?;
        let opts = SpaceOptions { max_states: self.max_states, ..SpaceOptions::population() };
        let space = enumerate_state_space(&sub, &opts)?;
        let p = if space.len() == 1 {
            vec![1.0]
        } else {
            stationary_distribution(&build_generator(&sub, &space, Truncation::Absorbing)?)?
        };
        Ok(population_moments(space.states(), &p, x_slow))
    }
}

impl FastClosure for StationaryClosure {
    fn name(&self) -> &'static str {
        "stationary"
    }

    fn provides_covariance(&self) -> bool {
        true
    }

    fn moments(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError> {
        if let Some(m) = self.cache.lock().expect("closure cache").get(x_slow) {
            return Ok(m.clone());
        }
        let m = self.compute(x_slow)?;
        self.cache.lock().expect("closure cache").insert(x_slow.to_vec(), m.clone());
        Ok(m)
    }
}

/// Conditional moments estimated by a long run of the isolated fast
/// subsystem: `burn_in` events are discarded, then population moments are
/// time-averaged over `events` further events.
pub struct NestedSsaClosure {
    net: ReactionNetwork,
    partition: MultiscalePartition,
    pub burn_in: usize,
    pub events: usize,
    pub seed: u64,
    cache: Mutex<HashMap<Vec<i64>, FastMoments>>,
}

impl NestedSsaClosure {
    pub fn new(net: &ReactionNetwork, partition: &MultiscalePartition, seed: u64) -> Result<Self, MultiscaleError> {
        if partition.is_trivial() {
            return Err(MultiscaleError::InvalidPartition("the fast set is empty".into()));
        }
        Ok(NestedSsaClosure {
            net: net.clone(),
            partition: partition.clone(),
            burn_in: 1_000,
            events: 20_000,
            seed,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Stream index derived from the slow population, so estimates do not
    /// depend on the order in which states are visited.
    fn stream(x: &[i64]) -> u64 {
        x.iter().fold(0x9E37_79B9_7F4A_7C15u64, |h, v| {
            let z = (h ^ *v as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z ^ (z >> 31)
        })
    }

    fn compute(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError> {
        let mut x = fast_class_seed(&self.net, &self.partition, x_slow)?;
        let fast = self.partition.fast();
        let n = x.len();
        let mut rng = trajectory_rng(self.seed, Self::stream(x_slow));
        let mut alpha = vec![0.0; fast.len()];
        let (mut sum, mut sum2, mut total_time) = (vec![0.0; n], vec![0.0; n * n], 0.0);
        for step in 0..self.burn_in + self.events {
            for (a, &m) in alpha.iter_mut().zip(fast) {
                *a = self.net.propensity(m, &x);
            }
            let total: f64 = alpha.iter().sum();
            if !(total > 0.0) {
                // absorbing fast state: the conditional law is a point mass
                return Ok(population_moments(&[x], &[1.0], x_slow));
            }
            let tau = rng.sample::<f64, _>(Exp1) / total;
            if step >= self.burn_in {
                total_time += tau;
                for i in 0..n {
                    let xi = x[i] as f64;
                    sum[i] += tau * xi;
                    for j in 0..n {
                        sum2[i * n + j] += tau * xi * x[j] as f64;
                    }
                }
            }
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = fast[0];
            for (a, &m) in alpha.iter().zip(fast) {
                if *a > 0.0 {
                    acc += a;
                    chosen = m;
                    if target < acc {
                        break;
                    }
                }
            }
            x.iter_mut().zip(self.net.stoich(chosen)).for_each(|(a, s)| *a += s);
        }
        let mean: Vec<f64> = sum.iter().map(|s| s / total_time).collect();
        let cov = (0..n * n).map(|k| sum2[k] / total_time - mean[k / n] * mean[k % n]).collect();
        let shift = mean.iter().zip(x_slow).map(|(m, x)| m - *x as f64).collect();
        Ok(FastMoments { shift, cov: Some(cov) })
    }
}

impl FastClosure for NestedSsaClosure {
    fn name(&self) -> &'static str {
        "ssa-nested"
    }

    fn provides_covariance(&self) -> bool {
        true
    }

    fn moments(&self, x_slow: &[i64]) -> Result<FastMoments, MultiscaleError> {
        if let Some(m) = self.cache.lock().expect("closure cache").get(x_slow) {
            return Ok(m.clone());
        }
        let m = self.compute(x_slow)?;
        self.cache.lock().expect("closure cache").insert(x_slow.to_vec(), m.clone());
        Ok(m)
    }
}
