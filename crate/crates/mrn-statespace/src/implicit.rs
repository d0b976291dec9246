//! Implicit Euler for the DA master equation. Under lexicographic ordering
//! the DA generator is lower triangular, so `(I − τQ) q̂ⱼ = q̂ⱼ₋₁` is solved
//! by forward substitution and every step is unconditionally stable.

use crate::generator::Generator;
use crate::{Propagation, StateSpaceError};

/// Default step: `max_z α(z) · τ = 0.1`.
pub fn default_ie_step(q_gen: &Generator) -> f64 {
    let a = q_gen.max_exit_rate();
    if a > 0.0 {
        0.1 / a
    } else {
        f64::INFINITY
    }
}

/// One implicit Euler step, in place.
pub fn ie_step(q_gen: &Generator, q: &mut [f64], tau: f64) -> Result<(), StateSpaceError> {
    if let Some((row, col)) = q_gen.upper_entry() {
        return Err(StateSpaceError::NotTriangular { row, col });
    }
    forward_substitute(q_gen, q, tau);
    Ok(())
}

fn forward_substitute(q_gen: &Generator, q: &mut [f64], tau: f64) {
    // column-oriented: once q̂ⱼ is final, push its contribution down the column
    let d = q_gen.diagonal();
    for j in 0..q.len() {
        q[j] /= 1.0 - tau * d[j];
        let qj = q[j];
        if qj != 0.0 {
            for (i, v) in q_gen.column(j) {
                q[i] += tau * v * qj;
            }
        }
    }
}

/// Integrates over `duration` with steps of at most `tau` (default
/// [`default_ie_step`]), adjusted to divide the duration evenly.
pub fn propagate_ie(
    q_gen: &Generator,
    q0: &[f64],
    duration: f64,
    tau: Option<f64>,
) -> Result<Propagation, StateSpaceError> {
    if q0.len() != q_gen.dim() {
        return Err(StateSpaceError::InvalidArgument("vector length does not match the generator".into()));
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(StateSpaceError::InvalidArgument("duration must be finite and nonnegative".into()));
    }
    if let Some((row, col)) = q_gen.upper_entry() {
        return Err(StateSpaceError::NotTriangular { row, col });
    }
    let tau_max = tau.unwrap_or_else(|| default_ie_step(q_gen));
    if !(tau_max > 0.0) {
        return Err(StateSpaceError::InvalidArgument("step size must be positive".into()));
    }
    let steps = if duration == 0.0 { 0 } else { (duration / tau_max).ceil().max(1.0) as usize };
    let h = if steps > 0 { duration / steps as f64 } else { 0.0 };
    let mut q = q0.to_vec();
    let initial: f64 = q.iter().sum();
    for _ in 0..steps {
        forward_substitute(q_gen, &mut q, h);
    }
    let mass: f64 = q.iter().sum();
    Ok(Propagation { t: duration, p: q, clipped_mass: 0.0, lost_mass: (initial - mass).max(0.0), steps })
}
