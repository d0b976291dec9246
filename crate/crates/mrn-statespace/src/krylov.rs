//! Krylov subspace approximation of `exp(τP) p` with Expokit-style step
//! control: each sub-step builds an Arnoldi basis of dimension `K₀`, forms
//! `‖p‖₂ V exp(τH) e₁`, and accepts the step when the a-posteriori error
//! estimate (from the augmented Hessenberg matrix) is below tolerance. If
//! the estimate cannot be brought below tolerance by shrinking the step,
//! the Krylov dimension is doubled (up to [`MAX_KRYLOV_DIM`]) and the step
//! retried.

use nalgebra::DMatrix;

use crate::generator::Generator;
use crate::{Propagation, StateSpaceError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsaOptions {
    /// Krylov dimension `K₀`.
    pub krylov_dim: usize,
    /// Local error tolerance per unit time.
    pub tol: f64,
    /// Maximum number of accepted sub-steps.
    pub max_steps: usize,
}

/// Largest Krylov dimension the step control may grow to when the
/// requested tolerance cannot be reached with `krylov_dim`.
pub const MAX_KRYLOV_DIM: usize = 320;

impl Default for KsaOptions {
    fn default() -> Self {
        KsaOptions { krylov_dim: 40, tol: 1e-7, max_steps: 1_000_000 }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rounds a step size to two significant digits, as Expokit does.
fn round_step(t: f64) -> f64 {
    let s = 10f64.powf(t.log10().floor() - 1.0);
    (t / s).ceil() * s
}

/// Propagates `p` over a duration `tau`.
pub fn propagate_ksa(
    gen: &Generator,
    p: &[f64],
    tau: f64,
    opts: &KsaOptions,
) -> Result<Propagation, StateSpaceError> {
    let grid = propagate_ksa_grid(gen, p, &[tau], opts)?;
    Ok(grid.into_iter().next().expect("one output time"))
}

/// Propagates `p0` from time 0 and returns the distribution at every time in
/// `times` (nondecreasing, ≥ 0).
pub fn propagate_ksa_grid(
    gen: &Generator,
    p0: &[f64],
    times: &[f64],
    opts: &KsaOptions,
) -> Result<Vec<Propagation>, StateSpaceError> {
    let n = gen.dim();
    if p0.len() != n {
        return Err(StateSpaceError::InvalidArgument(format!("vector of length {} for a {n}-state generator", p0.len())));
    }
    if opts.krylov_dim < 2 {
        return Err(StateSpaceError::InvalidArgument("Krylov dimension must be at least 2".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(StateSpaceError::InvalidArgument("output times must be finite, nonnegative and sorted".into()));
    }
    if p0.iter().any(|v| !v.is_finite()) {
        return Err(StateSpaceError::NonFinite("initial vector"));
    }
    let initial_mass: f64 = p0.iter().sum();
    let closed = gen.total_outflow_rate() == 0.0;

    let mut w = p0.to_vec();
    let mut t_now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let mut clipped = 0.0;
    let mut steps = 0usize;
    let mut state = StepState { t_new: None, krylov_dim: opts.krylov_dim };
    for &t_out in times {
        while t_now < t_out {
            let dt = match krylov_step(gen, &mut w, t_out - t_now, opts, &mut state) {
                Ok((dt, _)) => dt,
                // strongly non-normal generators can stall the error
                // estimate at a fixed dimension; enlarge the subspace
                Err(StateSpaceError::StepControl(_)) if state.krylov_dim < MAX_KRYLOV_DIM.min(n) => {
                    state.krylov_dim = (2 * state.krylov_dim).min(MAX_KRYLOV_DIM);
                    state.t_new = None;
                    log::info!("KSA step control stalled at t = {t_now}; Krylov dimension raised to {}", state.krylov_dim);
                    continue;
                }
                Err(e) => return Err(e),
            };
            t_now += dt;
            steps += 1;
            if steps > opts.max_steps {
                return Err(StateSpaceError::StepControl(format!("more than {} sub-steps", opts.max_steps)));
            }
            // clip negative round-off and restore the mass
            let mut neg = 0.0;
            for v in w.iter_mut() {
                if *v < 0.0 {
                    neg -= *v;
                    *v = 0.0;
                }
            }
            if neg > 0.0 {
                clipped += neg;
                log::trace!("KSA clipped {neg:.3e} negative mass at t = {t_now}");
                let s: f64 = w.iter().sum();
                let target = if closed { initial_mass } else { s - neg };
                if s > 0.0 {
                    let f = target.max(0.0) / s;
                    w.iter_mut().for_each(|v| *v *= f);
                }
            }
            if t_out - t_now < 1e-14 * t_out.max(1.0) {
                t_now = t_out;
            }
        }
        let mass: f64 = w.iter().sum();
        out.push(Propagation {
            t: t_out,
            p: w.clone(),
            clipped_mass: clipped,
            lost_mass: (initial_mass - mass).max(0.0),
            steps,
        });
    }
    if clipped > 1e-9 {
        log::warn!("KSA clipped a total negative mass of {clipped:.3e}");
    }
    Ok(out)
}

struct StepState {
    t_new: Option<f64>,
    /// Current Krylov dimension (starts at `opts.krylov_dim`).
    krylov_dim: usize,
}

/// One accepted Krylov sub-step of length at most `remaining`; overwrites `w`.
fn krylov_step(
    gen: &Generator,
    w: &mut Vec<f64>,
    remaining: f64,
    opts: &KsaOptions,
    state: &mut StepState,
) -> Result<(f64, f64), StateSpaceError> {
    let n = gen.dim();
    let beta = norm2(w);
    if beta == 0.0 {
        return Ok((remaining, 0.0));
    }
    let anorm = gen.norm_inf();
    if anorm == 0.0 || n == 1 {
        // exp(τP) with P = 0 (or a 1×1 generator)
        let f = (gen.get(0, 0) * remaining).exp();
        if n == 1 {
            w[0] *= f;
        }
        return Ok((remaining, 0.0));
    }
    // with m = n the Arnoldi process must break down, giving an exact step
    let m = state.krylov_dim.min(n);
    let tol = opts.tol;
    let btol = 1e-10 * anorm;
    let (delta, gamma) = (1.2, 0.9);
    let mut xm = 1.0 / m as f64;

    let t_new = match state.t_new {
        Some(t) => t,
        None => {
            let mf = (m + 1) as f64;
            let fact = (mf / std::f64::consts::E).powf(mf) * (2.0 * std::f64::consts::PI * mf).sqrt();
            round_step((1.0 / anorm) * ((fact * tol) / (4.0 * beta * anorm)).powf(xm))
        }
    };
    let mut t_step = remaining.min(t_new);

    // Arnoldi
    let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    v.push(w.iter().map(|x| x / beta).collect());
    let mut h = DMatrix::<f64>::zeros(m + 2, m + 2);
    let mut mb = m;
    let mut k1 = 2usize;
    let mut pvec = vec![0.0; n];
    for j in 0..m {
        gen.matvec(&v[j], &mut pvec);
        for (i, vi) in v.iter().enumerate() {
            let hij = dot(vi, &pvec);
            h[(i, j)] = hij;
            pvec.iter_mut().zip(vi).for_each(|(p, q)| *p -= hij * q);
        }
        let s = norm2(&pvec);
        if !s.is_finite() {
            return Err(StateSpaceError::NonFinite("Arnoldi vector"));
        }
        if s < btol {
            // happy breakdown: the subspace is invariant, exp is exact
            k1 = 0;
            mb = j + 1;
            t_step = remaining;
            break;
        }
        h[(j + 1, j)] = s;
        v.push(pvec.iter().map(|x| x / s).collect());
    }
    let mut avnorm = 0.0;
    if k1 != 0 {
        h[(m + 1, m)] = 1.0;
        gen.matvec(&v[m], &mut pvec);
        avnorm = norm2(&pvec);
    }

    let mut rejects = 0;
    let (f, err_loc) = loop {
        let mx = mb + k1;
        let hs = h.view((0, 0), (mx, mx)).into_owned() * t_step;
        let f = hs.exp();
        if f.iter().any(|x| !x.is_finite()) {
            return Err(StateSpaceError::NonFinite("small matrix exponential"));
        }
        if k1 == 0 {
            break (f, 0.0);
        }
        let phi1 = (beta * f[(m, 0)]).abs();
        let phi2 = (beta * f[(m + 1, 0)] * avnorm).abs();
        let err_loc = if phi1 > 10.0 * phi2 {
            xm = 1.0 / m as f64;
            phi2
        } else if phi1 > phi2 {
            xm = 1.0 / m as f64;
            phi1 * phi2 / (phi1 - phi2)
        } else {
            xm = 1.0 / (m as f64 - 1.0).max(1.0);
            phi1
        };
        if err_loc <= delta * t_step * tol {
            break (f, err_loc);
        }
        rejects += 1;
        if rejects > 20 {
            return Err(StateSpaceError::StepControl("requested tolerance cannot be reached".into()));
        }
        t_step = round_step(gamma * t_step * (t_step * tol / err_loc).powf(xm));
    };

    let mx = mb + k1.saturating_sub(1);
    w.iter_mut().for_each(|x| *x = 0.0);
    for (i, vi) in v.iter().enumerate().take(mx) {
        let c = beta * f[(i, 0)];
        w.iter_mut().zip(vi).for_each(|(a, b)| *a += c * b);
    }
    if k1 != 0 {
        state.t_new = Some(round_step(gamma * t_step * (t_step * tol / err_loc.max(f64::MIN_POSITIVE)).powf(xm)));
    }
    Ok((t_step, err_loc))
}
