//! Gillespie's direct method, optionally with biased propensities
//! `α′_m = λ_m α_m` and the matching likelihood-ratio weight.

use mrn_network::ReactionNetwork;
use rand::Rng;
use rand_distr::Exp1;

use crate::trajectory::{trajectory_rng, Trajectory, TrajectoryKind};
use crate::MonteCarloError;

/// Summary of one run of the direct method.
#[derive(Debug, Clone, PartialEq)]
pub struct SsaOutcome {
    pub events: usize,
    /// Every propensity vanished before the horizon.
    pub absorbed: bool,
    /// Population at the horizon (or at absorption).
    pub state: Vec<i64>,
    /// Natural logarithm of the likelihood-ratio weight (0 when unbiased).
    pub log_weight: f64,
}

fn check_lambda(net: &ReactionNetwork, lambda: Option<&[f64]>) -> Result<(), MonteCarloError> {
    if let Some(l) = lambda {
        if l.len() != net.n_reactions() {
            return Err(MonteCarloError::InvalidArgument(format!(
                "{} scalings for {} reactions",
                l.len(),
                net.n_reactions()
            )));
        }
        if l.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(MonteCarloError::InvalidArgument("scalings must be positive and finite".into()));
        }
    }
    Ok(())
}

pub(crate) fn check_horizon(t_end: f64) -> Result<(), MonteCarloError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(MonteCarloError::InvalidArgument(format!("horizon must be positive and finite, got {t_end}")));
    }
    Ok(())
}

/// Runs the direct method from `x₀` up to `t_end`.
///
/// `observer(t, m, x)` is called after every event with the firing time, the
/// reaction index and the new population. With `lambda`, reactions fire with
/// the biased propensities `λ_m α_m` and the outcome carries
/// `ln w = Σ_i [−ln λ_{m_i} + τ_i Σ_m (1 − 1/λ_m) α′_m]`, where the sum over
/// waiting intervals includes the final event-free interval up to `t_end`.
pub fn run_ssa<R, F>(
    net: &ReactionNetwork,
    t_end: f64,
    lambda: Option<&[f64]>,
    rng: &mut R,
    mut observer: F,
) -> Result<SsaOutcome, MonteCarloError>
where
    R: Rng + ?Sized,
    F: FnMut(f64, usize, &[i64]),
{
    check_horizon(t_end)?;
    check_lambda(net, lambda)?;
    let n_reactions = net.n_reactions();
    let deps = net.dependency_graph();
    let scale = |m: usize| lambda.map_or(1.0, |l| l[m]);
    let mut x = net.x0();
    let mut t = 0.0;
    let eval = |m: usize, x: &[i64], t: f64| -> Result<f64, MonteCarloError> {
        let a = net.propensity(m, x);
        if a.is_finite() {
            Ok(a)
        } else {
            Err(MonteCarloError::NonFinite { t, reaction: m, state: x.to_vec() })
        }
    };
    let mut alpha = Vec::with_capacity(n_reactions);
    for m in 0..n_reactions {
        alpha.push(eval(m, &x, t)?);
    }
    let mut log_weight = 0.0;
    let mut events = 0;
    let mut absorbed = false;
    loop {
        let base: f64 = alpha.iter().sum();
        let biased: f64 = if lambda.is_some() { alpha.iter().enumerate().map(|(m, a)| scale(m) * a).sum() } else { base };
        if biased <= 0.0 {
            absorbed = true;
            break;
        }
        let tau = rng.sample::<f64, _>(Exp1) / biased;
        if t + tau > t_end {
            log_weight += (t_end - t) * (biased - base);
            break;
        }
        // channel m with probability α′_m / Σα′
        let target = rng.random::<f64>() * biased;
        let mut acc = 0.0;
        let mut chosen = None;
        for (m, a) in alpha.iter().enumerate() {
            if *a > 0.0 {
                acc += scale(m) * a;
                chosen = Some(m);
                if target < acc {
                    break;
                }
            }
        }
        let m = chosen.expect("positive total propensity");
        log_weight += tau * (biased - base) - scale(m).ln();
        t += tau;
        for (xn, s) in x.iter_mut().zip(net.stoich(m)) {
            *xn += s;
        }
        if !net.in_bounds(&x) {
            return Err(MonteCarloError::OutOfBounds { t, state: x });
        }
        for &k in &deps[m] {
            alpha[k] = eval(k, &x, t)?;
        }
        events += 1;
        observer(t, m, &x);
    }
    if !log_weight.is_finite() {
        return Err(MonteCarloError::NonFiniteWeight);
    }
    Ok(SsaOutcome { events, absorbed, state: x, log_weight })
}

fn record(
    net: &ReactionNetwork,
    t_end: f64,
    lambda: Option<&[f64]>,
    seed: u64,
    stream: u64,
) -> Result<(Trajectory, f64), MonteCarloError> {
    let mut traj = Trajectory::start(TrajectoryKind::Exact, seed, stream, t_end, net.n_reactions());
    let mut z = vec![0.0; net.n_reactions()];
    let mut rng = trajectory_rng(seed, stream);
    let out = run_ssa(net, t_end, lambda, &mut rng, |t, m, _| {
        z[m] += 1.0;
        traj.times.push(t);
        traj.da.push(z.clone());
        traj.channels.push(m);
    })?;
    traj.absorbed = out.absorbed;
    Ok((traj, out.log_weight.exp()))
}

/// Exact trajectory on `[0, t_end]`.
pub fn simulate_ssa(net: &ReactionNetwork, t_end: f64, seed: u64) -> Result<Trajectory, MonteCarloError> {
    simulate_ssa_stream(net, t_end, seed, 0)
}

/// Exact trajectory drawn from stream `stream` of `seed`; equals member
/// `stream` of an SSA ensemble with the same seed.
pub fn simulate_ssa_stream(
    net: &ReactionNetwork,
    t_end: f64,
    seed: u64,
    stream: u64,
) -> Result<Trajectory, MonteCarloError> {
    Ok(record(net, t_end, None, seed, stream)?.0)
}

/// Trajectory sampled with propensities `λ_m α_m`, together with its
/// likelihood-ratio weight.
pub fn simulate_weighted(
    net: &ReactionNetwork,
    t_end: f64,
    lambda: &[f64],
    seed: u64,
) -> Result<(Trajectory, f64), MonteCarloError> {
    record(net, t_end, Some(lambda), seed, 0)
}
