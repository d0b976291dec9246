//! Fixed-step approximations of the DA process: Poisson leaping and the
//! Euler–Maruyama discretisation of the Langevin equation.

use mrn_network::{Jet, ReactionNetwork};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::ssa::check_horizon;
use crate::trajectory::{trajectory_rng, Trajectory, TrajectoryKind};
use crate::MonteCarloError;

/// How the leap length is chosen at each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauPolicy {
    /// Constant leap `τ` (the last step is shortened to hit the horizon).
    Fixed(f64),
    /// `τ = min(τ_max, ε · min_m α_m / |Σ_{m′} (∂α_m/∂z_{m′}) α_{m′}|)`: the
    /// expected first-order change of every propensity over one leap is at
    /// most a fraction `ε` of its value.
    Bounded { tau_max: f64, epsilon: f64 },
}

impl TauPolicy {
    pub const DEFAULT_EPSILON: f64 = 0.03;

    fn tau_max(self) -> f64 {
        match self {
            TauPolicy::Fixed(t) => t,
            TauPolicy::Bounded { tau_max, .. } => tau_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeapOptions {
    pub tau: TauPolicy,
    /// Rejected leaps are retried with half the step; below this size the
    /// run aborts.
    pub tau_min: f64,
}

impl LeapOptions {
    /// Fixed leap `τ` with `τ_min = 10⁻⁶ τ`.
    pub fn fixed(tau: f64) -> Self {
        LeapOptions { tau: TauPolicy::Fixed(tau), tau_min: 1e-6 * tau }
    }

    /// Bounded leap with the default `ε` and `τ_min = 10⁻⁶ τ_max`.
    pub fn bounded(tau_max: f64) -> Self {
        LeapOptions { tau: TauPolicy::Bounded { tau_max, epsilon: TauPolicy::DEFAULT_EPSILON }, tau_min: 1e-6 * tau_max }
    }

    fn check(&self) -> Result<(), MonteCarloError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let eps_ok = match self.tau {
            TauPolicy::Fixed(_) => true,
            TauPolicy::Bounded { epsilon, .. } => ok(epsilon),
        };
        if !(ok(self.tau.tau_max()) && ok(self.tau_min) && eps_ok) {
            return Err(MonteCarloError::InvalidArgument("leap sizes and ε must be positive and finite".into()));
        }
        Ok(())
    }
}

fn propensities(net: &ReactionNetwork, x: &[i64], t: f64) -> Result<Vec<f64>, MonteCarloError> {
    (0..net.n_reactions())
        .map(|m| {
            let a = net.propensity(m, x);
            if a.is_finite() {
                Ok(a)
            } else {
                Err(MonteCarloError::NonFinite { t, reaction: m, state: x.to_vec() })
            }
        })
        .collect()
}

/// The leap bound `ε · min_m α_m / |∇_z α_m · α|` (∞ when no propensity
/// changes to first order).
pub fn leap_bound(net: &ReactionNetwork, x: &[i64], alpha: &[f64], epsilon: f64) -> f64 {
    let n = net.n_species();
    let xj: Vec<Jet> = x.iter().enumerate().map(|(i, v)| Jet::variable(n, 1, i, *v as f64)).collect();
    let grads = net.propensities_real(&xj);
    // expected population drift per unit time
    let mut drift = vec![0.0; n];
    for (m, a) in alpha.iter().enumerate() {
        for (d, s) in drift.iter_mut().zip(net.stoich(m)) {
            *d += *s as f64 * a;
        }
    }
    let mut bound = f64::INFINITY;
    for (m, g) in grads.iter().enumerate() {
        let rate: f64 = g.g.iter().zip(&drift).map(|(a, b)| a * b).sum();
        if alpha[m] > 0.0 && rate.abs() > 0.0 {
            bound = bound.min(epsilon * alpha[m] / rate.abs());
        }
    }
    bound
}

/// Runs Poisson leaping from `x₀`; `observer(t, k, x)` receives the end time
/// of each accepted leap, the firing counts and the new population. Returns
/// the number of rejected leaps.
pub fn run_poisson_leap<R, F>(
    net: &ReactionNetwork,
    t_end: f64,
    opts: &LeapOptions,
    rng: &mut R,
    mut observer: F,
) -> Result<usize, MonteCarloError>
where
    R: Rng + ?Sized,
    F: FnMut(f64, &[u64], &[i64]),
{
    check_horizon(t_end)?;
    opts.check()?;
    let n_reactions = net.n_reactions();
    let mut x = net.x0();
    let mut t = 0.0;
    let mut rejected = 0;
    let mut k = vec![0u64; n_reactions];
    let mut trial = x.clone();
    while t < t_end {
        let alpha = propensities(net, &x, t)?;
        if alpha.iter().all(|a| *a == 0.0) {
            break;
        }
        let mut tau = match opts.tau {
            TauPolicy::Fixed(tau) => tau,
            TauPolicy::Bounded { tau_max, epsilon } => tau_max.min(leap_bound(net, &x, &alpha, epsilon)),
        }
        .min(t_end - t);
        loop {
            for (km, a) in k.iter_mut().zip(&alpha) {
                let mean = a * tau;
                *km = if mean > 0.0 {
                    let d = Poisson::new(mean).map_err(|e| MonteCarloError::InvalidArgument(e.to_string()))?;
                    d.sample(rng) as u64
                } else {
                    0
                };
            }
            trial.copy_from_slice(&x);
            for (m, km) in k.iter().enumerate() {
                if *km > 0 {
                    for (xn, s) in trial.iter_mut().zip(net.stoich(m)) {
                        *xn += s * *km as i64;
                    }
                }
            }
            if net.in_bounds(&trial) {
                break;
            }
            rejected += 1;
            tau *= 0.5;
            log::debug!("Poisson leap left the bounds at t = {t}; retrying with τ = {tau:e}");
            if tau < opts.tau_min {
                return Err(MonteCarloError::Stiff { t, tau_min: opts.tau_min });
            }
        }
        // land exactly on the horizon despite rounding
        t = if t_end - (t + tau) <= 1e-12 * t_end { t_end } else { t + tau };
        std::mem::swap(&mut x, &mut trial);
        observer(t, &k, &x);
    }
    Ok(rejected)
}

/// Poisson-leap trajectory with a fixed leap `tau`.
pub fn simulate_poisson_leap(net: &ReactionNetwork, t_end: f64, tau: f64, seed: u64) -> Result<Trajectory, MonteCarloError> {
    simulate_poisson_leap_with(net, t_end, &LeapOptions::fixed(tau), seed)
}

pub fn simulate_poisson_leap_with(
    net: &ReactionNetwork,
    t_end: f64,
    opts: &LeapOptions,
    seed: u64,
) -> Result<Trajectory, MonteCarloError> {
    let mut traj = Trajectory::start(TrajectoryKind::Poisson, seed, 0, t_end, net.n_reactions());
    let mut z = vec![0.0; net.n_reactions()];
    let mut rng = trajectory_rng(seed, 0);
    let rejected = run_poisson_leap(net, t_end, opts, &mut rng, |t, k, _| {
        z.iter_mut().zip(k).for_each(|(a, b)| *a += *b as f64);
        traj.times.push(t);
        traj.da.push(z.clone());
    })?;
    traj.rejected_leaps = rejected;
    traj.absorbed = traj.times.last().is_some_and(|t| *t < t_end);
    Ok(traj)
}

/// Source of the Gaussian increments of the Langevin scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LangevinNoise {
    #[default]
    Gaussian,
    /// All increments zero: the scheme reduces to explicit Euler on the
    /// macroscopic rate equations (useful for testing).
    Zero,
}

/// Runs the Euler–Maruyama scheme
/// `Ẑ_m ← Ẑ_m + α_m τ + √(α_m τ) G_m` with `α_m` evaluated at the real
/// population `x₀ + S Ẑ` and clamped at zero. `observer(t, z, x)` receives
/// every step.
pub fn run_langevin<R, F>(
    net: &ReactionNetwork,
    t_end: f64,
    tau: f64,
    noise: LangevinNoise,
    rng: &mut R,
    mut observer: F,
) -> Result<(), MonteCarloError>
where
    R: Rng + ?Sized,
    F: FnMut(f64, &[f64], &[f64]),
{
    check_horizon(t_end)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(MonteCarloError::InvalidArgument(format!("step must be positive and finite, got {tau}")));
    }
    let mut z = vec![0.0; net.n_reactions()];
    let steps = (t_end / tau).ceil().max(1.0) as u64;
    let mut t = 0.0;
    for j in 1..=steps {
        let t_next = if j == steps { t_end } else { j as f64 * tau };
        let dt = t_next - t;
        let x = net.da_to_population_real(&z);
        let alpha = net.propensities_real(&x);
        for (zm, a) in z.iter_mut().zip(&alpha) {
            let a = a.max(0.0);
            let g: f64 = match noise {
                LangevinNoise::Gaussian => rng.sample(StandardNormal),
                LangevinNoise::Zero => 0.0,
            };
            *zm += a * dt + (a * dt).sqrt() * g;
        }
        t = t_next;
        if z.iter().any(|v| !v.is_finite()) {
            return Err(MonteCarloError::NonFinitePath(t));
        }
        observer(t, &z, &net.da_to_population_real(&z));
    }
    Ok(())
}

/// Real-valued Langevin trajectory with step `tau`.
pub fn simulate_langevin(net: &ReactionNetwork, t_end: f64, tau: f64, seed: u64) -> Result<Trajectory, MonteCarloError> {
    simulate_langevin_with(net, t_end, tau, seed, LangevinNoise::Gaussian)
}

pub fn simulate_langevin_with(
    net: &ReactionNetwork,
    t_end: f64,
    tau: f64,
    seed: u64,
    noise: LangevinNoise,
) -> Result<Trajectory, MonteCarloError> {
    let mut traj = Trajectory::start(TrajectoryKind::Langevin, seed, 0, t_end, net.n_reactions());
    let mut rng = trajectory_rng(seed, 0);
    run_langevin(net, t_end, tau, noise, &mut rng, |t, z, _| {
        traj.times.push(t);
        traj.da.push(z.to_vec());
    })?;
    Ok(traj)
}
