//! Monte Carlo estimators over a [`TrajectoryEnsemble`]. For biased
//! ensembles each sample enters with its likelihood-ratio weight and sums
//! are still divided by the number of trajectories.

use std::collections::BTreeMap;

use crate::ensemble::TrajectoryEnsemble;
use crate::MonteCarloError;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStatistics {
    pub times: Vec<f64>,
    pub n_species: usize,
    /// `means[i][n]`: mean of species `n` at `times[i]`.
    pub means: Vec<Vec<f64>>,
    /// `covariances[i][n * n_species + k]`, with the unbiased `1/(L−1)`
    /// normalisation.
    pub covariances: Vec<Vec<f64>>,
}

impl EnsembleStatistics {
    pub fn variance(&self, i: usize, n: usize) -> f64 {
        self.covariances[i][n * self.n_species + n]
    }
}

/// Index of `t` on the recorded grid.
pub fn grid_index(ens: &TrajectoryEnsemble, t: f64) -> Result<usize, MonteCarloError> {
    let horizon = ens.horizon();
    if !(0.0..=horizon).contains(&t) {
        return Err(MonteCarloError::OutsideHorizon { t, horizon });
    }
    let tol = 1e-12 * horizon.max(1.0);
    ens.grid
        .iter()
        .position(|g| (g - t).abs() <= tol)
        .ok_or_else(|| MonteCarloError::InvalidArgument(format!("t = {t} is not on the recorded grid")))
}

/// Sample means and covariances at each of `times` (which must lie on the
/// recorded grid). Needs at least two trajectories.
pub fn estimate_statistics(ens: &TrajectoryEnsemble, times: &[f64]) -> Result<EnsembleStatistics, MonteCarloError> {
    let l = ens.len();
    if l < 2 {
        return Err(MonteCarloError::InvalidArgument("covariances need at least two trajectories".into()));
    }
    let n = ens.n_species;
    let mut means = Vec::with_capacity(times.len());
    let mut covariances = Vec::with_capacity(times.len());
    for &t in times {
        let g = grid_index(ens, t)?;
        let mut mu = vec![0.0; n];
        for (i, w) in ens.weights.iter().enumerate() {
            mu.iter_mut().zip(ens.state(i, g)).for_each(|(m, x)| *m += w * x);
        }
        mu.iter_mut().for_each(|m| *m /= l as f64);
        let mut cov = vec![0.0; n * n];
        for (i, w) in ens.weights.iter().enumerate() {
            let x = ens.state(i, g);
            for a in 0..n {
                let da = x[a] - mu[a];
                for b in a..n {
                    cov[a * n + b] += w * da * (x[b] - mu[b]);
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                cov[a * n + b] /= (l - 1) as f64;
                cov[b * n + a] = cov[a * n + b];
            }
        }
        means.push(mu);
        covariances.push(cov);
    }
    Ok(EnsembleStatistics { times: times.to_vec(), n_species: n, means, covariances })
}

/// Empirical probability mass function of the selected species at one time.
///
/// Real-valued (Langevin) samples are rounded to the nearest integer.
/// `mass` accumulates weights, so `Σ mass = total` holds exactly for
/// unweighted ensembles (integer counts).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPmf {
    pub species: Vec<usize>,
    pub mass: BTreeMap<Vec<i64>, f64>,
    /// Number of trajectories `L`.
    pub total: f64,
}

impl EmpiricalPmf {
    pub fn probability(&self, state: &[i64]) -> f64 {
        self.mass.get(state).map_or(0.0, |m| m / self.total)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, f64)> + '_ {
        self.mass.iter().map(move |(k, m)| (k, m / self.total))
    }
}

/// Kronecker-delta estimator `p̂(x; t) = (1/L) Σ_l w_l Δ(x⁽ˡ⁾(t) − x)`
/// restricted to `species` (all species when empty).
pub fn empirical_pmf(ens: &TrajectoryEnsemble, t: f64, species: &[usize]) -> Result<EmpiricalPmf, MonteCarloError> {
    let g = grid_index(ens, t)?;
    let species: Vec<usize> = if species.is_empty() { (0..ens.n_species).collect() } else { species.to_vec() };
    if let Some(s) = species.iter().find(|s| **s >= ens.n_species) {
        return Err(MonteCarloError::InvalidArgument(format!("species index {s} out of range")));
    }
    let mut mass = BTreeMap::new();
    for (l, w) in ens.weights.iter().enumerate() {
        let x = ens.state(l, g);
        let key: Vec<i64> = species.iter().map(|s| x[*s].round() as i64).collect();
        *mass.entry(key).or_insert(0.0) += w;
    }
    Ok(EmpiricalPmf { species, mass, total: ens.len() as f64 })
}

/// Estimate of an event probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimate {
    pub p: f64,
    pub std_error: f64,
}

/// `(1/L) Σ_l w_l [T_l ∈ E]`, where membership is decided on the recorded
/// path `(grid, samples[l])`.
pub fn estimate_probability<F>(ens: &TrajectoryEnsemble, event: F) -> ProbabilityEstimate
where
    F: Fn(&[f64], &[f64]) -> bool,
{
    let l = ens.len() as f64;
    let values: Vec<f64> =
        ens.samples.iter().zip(&ens.weights).map(|(s, w)| if event(&ens.grid, s) { *w } else { 0.0 }).collect();
    let p = values.iter().sum::<f64>() / l;
    let var = if ens.len() > 1 { values.iter().map(|v| (v - p).powi(2)).sum::<f64>() / (l - 1.0) } else { 0.0 };
    ProbabilityEstimate { p, std_error: (var / l).sqrt() }
}
