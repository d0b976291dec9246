//! Adaptive explicit Runge–Kutta integration with the Dormand–Prince 5(4)
//! embedded pair (first-same-as-last, local extrapolation).

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
    /// Steps below `h_min · max(1, |t|)` abort the integration.
    pub h_min: f64,
    /// Largest allowed step.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-8, atol: 1e-10, h0: None, h_min: 1e-14, h_max: f64::INFINITY, max_steps: 10_000_000 }
    }
}

#[derive(Debug, Error)]
pub enum OdeError<E> {
    #[error(transparent)]
    Rhs(E),
    #[error("step size underflow (h = {h:e}) at t = {t}: the system is too stiff for an explicit method")]
    StepUnderflow { t: f64, h: f64 },
    #[error("more than {max_steps} steps before t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("non-finite solution at t = {0}")]
    NonFinite(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y′ = f(t, y)` from `(t0, y0)` and returns the solution at
/// every time in `times` (sorted, `≥ t0`).
///
/// After each accepted step `post_step(t, y)` may modify the state in place
/// (returning `true` when it did), e.g. to project onto a constraint set.
pub fn integrate<E, F, H>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    times: &[f64],
    opts: &OdeOptions,
    mut post_step: H,
) -> Result<(Vec<Vec<f64>>, OdeStats), OdeError<E>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E>,
    H: FnMut(f64, &mut [f64]) -> Result<bool, E>,
{
    if times.iter().any(|t| !t.is_finite() || *t < t0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(OdeError::InvalidArgument("output times must be finite, sorted and not before t0".into()));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(OdeError::InvalidArgument("tolerances must be positive".into()));
    }
    let n = y0.len();
    let mut stats = OdeStats::default();
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut t = t0;
    let mut out = Vec::with_capacity(times.len());
    f(t, &y, &mut k[0]).map_err(OdeError::Rhs)?;
    stats.evaluations += 1;
    let scale = |a: f64, b: f64| opts.atol + opts.rtol * a.abs().max(b.abs());
    let mut h = match opts.h0 {
        Some(h) => h,
        None => initial_step(&mut f, t, &y, &k[0], opts, &mut stats)?,
    }
    .min(opts.h_max);

    for &t_out in times {
        while t < t_out {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(OdeError::TooManySteps { t, max_steps: opts.max_steps });
            }
            let remaining = t_out - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step < opts.h_min * t.abs().max(1.0) && !last {
                return Err(OdeError::StepUnderflow { t, h: step });
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, a) in A[s].iter().enumerate().take(s) {
                        acc += a * k[j][i];
                    }
                    ytmp[i] = y[i] + step * acc;
                }
                f(t + C[s] * step, &ytmp, &mut k[s]).map_err(OdeError::Rhs)?;
                stats.evaluations += 1;
            }
            // the last stage is evaluated at the fifth-order solution
            ynew.copy_from_slice(&ytmp);
            let mut err = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, w) in E.iter().enumerate() {
                    e += w * k[j][i];
                }
                let r = step * e / scale(y[i], ynew[i]);
                err += r * r;
            }
            let err = if n > 0 { (err / n as f64).sqrt() } else { 0.0 };
            if !err.is_finite() {
                // overflow inside the step: retry with a much smaller one
                stats.rejected += 1;
                h = step * 0.25;
                if h < opts.h_min * t.abs().max(1.0) {
                    return Err(OdeError::NonFinite(t));
                }
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                stats.accepted += 1;
                t = if last { t_out } else { t + step };
                std::mem::swap(&mut y, &mut ynew);
                if post_step(t, &mut y).map_err(OdeError::Rhs)? {
                    f(t, &y, &mut k[0]).map_err(OdeError::Rhs)?;
                    stats.evaluations += 1;
                } else {
                    k.swap(0, 6);
                }
                if !last || factor < 1.0 {
                    h = (step * factor).min(opts.h_max);
                }
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
                if h < opts.h_min * t.abs().max(1.0) {
                    return Err(OdeError::StepUnderflow { t, h });
                }
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

/// Starting step from the standard two-evaluation heuristic.
fn initial_step<E, F>(
    f: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    opts: &OdeOptions,
    stats: &mut OdeStats,
) -> Result<f64, OdeError<E>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E>,
{
    let n = y.len();
    if n == 0 {
        return Ok(1.0);
    }
    let sc: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; n];
    f(t + h0, &y1, &mut f1).map_err(OdeError::Rhs)?;
    stats.evaluations += 1;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    Ok((100.0 * h0).min(h1))
}
