//! The reduced slow master equation: slow reactions fire with the
//! conditional means of their original propensities given the slow state.

use mrn_network::{Jet, Propensity, ReactionNetwork};

use crate::closure::FastClosure;
use crate::{MultiscaleError, MultiscalePartition};

/// Slow propensities at one slow state.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowPropensities {
    /// `α_m(z_s)`, one entry per slow reaction (order of
    /// [`MultiscalePartition::slow`]).
    pub alpha: Vec<f64>,
    /// Population estimate `x̂ = x_s + E[Δ | z_s]`.
    pub x_hat: Vec<f64>,
    /// Slow propensities that came out negative and were set to zero.
    pub clamped: usize,
}

/// Handle on the reduced (slow) system of a partitioned network.
pub struct ReducedNetwork {
    net: ReactionNetwork,
    partition: MultiscalePartition,
    closure: Option<Box<dyn FastClosure>>,
    /// Per slow reaction: whether its propensity is nonlinear in the
    /// fast-affected species (needs the second-order term).
    nonlinear: Vec<bool>,
}

/// Whether the propensity of `m` is nonlinear along fast-affected species.
fn depends_nonlinearly(net: &ReactionNetwork, partition: &MultiscalePartition, m: usize) -> bool {
    let r = &net.reactions()[m];
    match r.propensity {
        Propensity::MassAction { .. } => {
            let order: u32 = partition.fast_species().iter().map(|&n| r.reactants[n]).sum();
            order >= 2
        }
        _ => net.referenced_species(m).iter().any(|&n| partition.is_fast_species(n)),
    }
}

/// Builds the reduced system. A closure is required unless the fast set is
/// empty, in which case the reduced system is the original network.
///
/// Slow propensities that depend affinely on the fast-affected species are
/// evaluated exactly at the conditional mean; the others receive the
/// second-order Taylor term `½ Σ ∂²π/∂x_i∂x_j Cov(Δ_i, Δ_j)`, which needs a
/// closure that provides covariances.
pub fn reduce_network(
    net: &ReactionNetwork,
    partition: &MultiscalePartition,
    closure: Option<Box<dyn FastClosure>>,
) -> Result<ReducedNetwork, MultiscaleError> {
    if partition.n_species() != net.n_species() {
        return Err(MultiscaleError::InvalidPartition("partition was built for another network".into()));
    }
    let nonlinear: Vec<bool> = partition.slow().iter().map(|&m| depends_nonlinearly(net, partition, m)).collect();
    let closure = if partition.is_trivial() {
        None
    } else {
        let c = closure.ok_or_else(|| MultiscaleError::InvalidArgument("a nonempty fast set needs a closure".into()))?;
        if !c.provides_covariance() {
            if let Some(k) = nonlinear.iter().position(|b| *b) {
                return Err(MultiscaleError::ClosureOrder { reaction: partition.slow()[k] });
            }
        }
        Some(c)
    };
    Ok(ReducedNetwork { net: net.clone(), partition: partition.clone(), closure, nonlinear })
}

impl ReducedNetwork {
    pub fn network(&self) -> &ReactionNetwork {
        &self.net
    }

    pub fn partition(&self) -> &MultiscalePartition {
        &self.partition
    }

    pub fn closure_name(&self) -> Option<&'static str> {
        self.closure.as_ref().map(|c| c.name())
    }

    /// Slow reactions whose propensity needs the second-order term.
    pub fn nonlinear_reactions(&self) -> Vec<usize> {
        self.partition.slow().iter().zip(&self.nonlinear).filter(|(_, b)| **b).map(|(m, _)| *m).collect()
    }

    /// Population estimate `x̂` at the slow population `x_slow`.
    pub fn estimate(&self, x_slow: &[i64]) -> Result<Vec<f64>, MultiscaleError> {
        Ok(self.propensities(x_slow)?.x_hat)
    }

    /// Slow propensities at the slow population `x_slow = x₀ + S_s z_s`.
    pub fn propensities(&self, x_slow: &[i64]) -> Result<SlowPropensities, MultiscaleError> {
        let slow = self.partition.slow();
        let Some(closure) = &self.closure else {
            let alpha = slow.iter().map(|&m| self.net.propensity(m, x_slow)).collect::<Vec<_>>();
            if let Some(k) = alpha.iter().position(|a| !a.is_finite()) {
                return Err(MultiscaleError::NonFinite { reaction: slow[k], state: x_slow.to_vec() });
            }
            let x_hat = x_slow.iter().map(|v| *v as f64).collect();
            return Ok(SlowPropensities { alpha, x_hat, clamped: 0 });
        };
        let moments = closure.moments(x_slow)?;
        let n = x_slow.len();
        if moments.shift.len() != n || moments.cov.as_ref().is_some_and(|c| c.len() != n * n) {
            return Err(MultiscaleError::ClosureFailure {
                state: x_slow.to_vec(),
                reason: "closure returned moments of the wrong shape".into(),
            });
        }
        let x_hat: Vec<f64> = x_slow.iter().zip(&moments.shift).map(|(x, d)| *x as f64 + d).collect();
        for (i, (v, s)) in x_hat.iter().zip(self.net.species()).enumerate() {
            let tol = 1e-9 * v.abs().max(1.0);
            if !v.is_finite() || *v < s.min as f64 - tol || *v > s.max as f64 + tol {
                return Err(MultiscaleError::ClosureFailure {
                    state: x_slow.to_vec(),
                    reason: format!("estimate {v} of species {i} lies outside [{}, {}]", s.min, s.max),
                });
            }
        }
        let mut alpha = Vec::with_capacity(slow.len());
        let mut clamped = 0;
        for (&m, &nonlinear) in slow.iter().zip(&self.nonlinear) {
            let r = &self.net.reactions()[m];
            let a = if nonlinear {
                let cov = moments.cov.as_ref().ok_or(MultiscaleError::ClosureOrder { reaction: m })?;
                let vars: Vec<Jet> = (0..n).map(|i| Jet::variable(n, 2, i, x_hat[i])).collect();
                let j = r.propensity.eval(&vars, &r.reactants);
                j.v + 0.5 * j.h.iter().zip(cov).map(|(h, c)| h * c).sum::<f64>()
            } else {
                r.propensity.eval(&x_hat, &r.reactants)
            };
            if !a.is_finite() {
                return Err(MultiscaleError::NonFinite { reaction: m, state: x_slow.to_vec() });
            }
            if a < 0.0 {
                clamped += 1;
            }
            alpha.push(a.max(0.0));
        }
        Ok(SlowPropensities { alpha, x_hat, clamped })
    }
}

/// Optimum mean-square estimate of the population from the slow DAs:
/// `x̂ = x₀ + Σ_{m∈M_s} s_m z_m + Σ_{m∈M_f} s_m μ_Z(m | z_s)`.
///
/// `z_s` lists the slow DAs in the order of [`MultiscalePartition::slow`].
pub fn estimate_population_from_slow(
    net: &ReactionNetwork,
    partition: &MultiscalePartition,
    z_s: &[u64],
    closure: Option<&dyn FastClosure>,
) -> Result<Vec<f64>, MultiscaleError> {
    if z_s.len() != partition.slow().len() {
        return Err(MultiscaleError::InvalidArgument(format!(
            "{} slow DAs for {} slow reactions",
            z_s.len(),
            partition.slow().len()
        )));
    }
    let x_slow = partition.slow_population(net, z_s);
    let mut x: Vec<f64> = x_slow.iter().map(|v| *v as f64).collect();
    if !partition.is_trivial() {
        let c = closure.ok_or_else(|| MultiscaleError::InvalidArgument("a nonempty fast set needs a closure".into()))?;
        x.iter_mut().zip(c.moments(&x_slow)?.shift).for_each(|(a, d)| *a += d);
    }
    Ok(x)
}
