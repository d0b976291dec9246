use std::cell::Cell;

use mrn_network::ReactionNetwork;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::closure::{ClosureKind, MomentClosure};
use crate::ode::{integrate, OdeOptions, OdeStats};
use crate::rhs::MomentSystem;
use crate::MomentError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    pub closure: ClosureKind,
    pub jensen: bool,
    pub ode: OdeOptions,
    /// Covariances whose smallest eigenvalue lies in
    /// `(−psd_tol · max(1, λ_max), 0)` are projected onto the positive
    /// semidefinite cone; more negative eigenvalues abort the integration.
    pub psd_tol: f64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { closure: ClosureKind::Normal, jensen: false, ode: OdeOptions::default(), psd_tol: 1e-8 }
    }
}

/// Means and covariances of the DA process at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentState {
    pub t: f64,
    pub mu: Vec<f64>,
    /// Row-major symmetric `M × M` covariance.
    pub cov: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MomentDiagnostics {
    /// Accepted steps at which some DA mean was negative.
    pub negative_means: usize,
    pub psd_projections: usize,
    /// Closure entries that fell back to the normal value.
    pub closure_fallbacks: usize,
    /// Right-hand-side evaluations in which a Jensen clamp was active.
    pub clamped_evaluations: usize,
    pub ode: OdeStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSolution {
    pub states: Vec<MomentState>,
    /// `μ_X = x₀ + S μ_Z` at each output time.
    pub mean_x: Vec<Vec<f64>>,
    /// `C_X = S C_Z Sᵀ` (row-major `N × N`).
    pub cov_x: Vec<Vec<f64>>,
    pub diagnostics: MomentDiagnostics,
}

impl MomentSolution {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    /// Standard deviation of species `n` at output `i`.
    pub fn std_x(&self, i: usize, n: usize) -> f64 {
        let dim = self.mean_x[i].len();
        self.cov_x[i][n * dim + n].max(0.0).sqrt()
    }
}

/// Population mean and covariance implied by a DA moment state.
pub fn population_moments(net: &ReactionNetwork, state: &MomentState) -> (Vec<f64>, Vec<f64>) {
    let (n, m) = (net.n_species(), net.n_reactions());
    let s = |i: usize, k: usize| net.stoich(k)[i] as f64;
    let mean = net.da_to_population_real(&state.mu);
    let mut cov = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut v = 0.0;
            for a in 0..m {
                let sia = s(i, a);
                if sia == 0.0 {
                    continue;
                }
                for b in 0..m {
                    v += sia * state.cov[a * m + b] * s(j, b);
                }
            }
            cov[i * n + j] = v;
            cov[j * n + i] = v;
        }
    }
    (mean, cov)
}

fn tri_index(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect()
}

/// Integrates the closed moment equations from `μ_Z = 0`, `C_Z = 0` at
/// `t = 0` and reports moments at each of `times`.
pub fn integrate_moments(net: &ReactionNetwork, times: &[f64], opts: &MomentOptions) -> Result<MomentSolution, MomentError> {
    let closure = opts.closure.closure();
    integrate_moments_with(net, times, closure.as_ref(), opts)
}

/// As [`integrate_moments`] with a caller-supplied closure (`opts.closure`
/// is ignored).
pub fn integrate_moments_with(
    net: &ReactionNetwork,
    times: &[f64],
    closure: &dyn MomentClosure,
    opts: &MomentOptions,
) -> Result<MomentSolution, MomentError> {
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(MomentError::InvalidArgument("output times must be finite and nonnegative".into()));
    }
    let m = net.n_reactions();
    let system = MomentSystem::new(net, closure, opts.jensen);
    let tri = tri_index(m);
    let unpack = |y: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut cov = vec![0.0; m * m];
        for (k, (a, b)) in tri.iter().enumerate() {
            cov[a * m + b] = y[m + k];
            cov[b * m + a] = y[m + k];
        }
        (y[..m].to_vec(), cov)
    };
    let fallbacks = Cell::new(0usize);
    let clamped = Cell::new(0usize);
    let negative = Cell::new(0usize);
    let projections = Cell::new(0usize);
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<(), MomentError> {
        let (mu, cov) = unpack(y);
        let r = system.rhs(&mu, &cov)?;
        fallbacks.set(fallbacks.get() + r.fallbacks);
        if r.clamped > 0 {
            clamped.set(clamped.get() + 1);
        }
        dy[..m].copy_from_slice(&r.dmu);
        for (k, (a, b)) in tri.iter().enumerate() {
            dy[m + k] = r.dcov[a * m + b];
        }
        Ok(())
    };
    let psd_tol = opts.psd_tol;
    let hook = |t: f64, y: &mut [f64]| -> Result<bool, MomentError> {
        let scale = y[..m].iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if y[..m].iter().any(|v| *v < -1e-9 * scale) {
            if negative.get() == 0 {
                log::warn!("negative mean degree of advancement at t = {t}");
            }
            negative.set(negative.get() + 1);
        }
        if m == 0 {
            return Ok(false);
        }
        let (_, cov) = unpack(y);
        let eig = SymmetricEigen::new(DMatrix::from_row_slice(m, m, &cov));
        let min = eig.eigenvalues.min();
        if min >= 0.0 {
            return Ok(false);
        }
        let top = eig.eigenvalues.max().max(1.0);
        if min < -psd_tol * top {
            return Err(MomentError::PsdViolation { t, eigenvalue: min });
        }
        let clipped = eig.eigenvalues.map(|v| v.max(0.0));
        let fixed = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        for (k, (a, b)) in tri.iter().enumerate() {
            y[m + k] = fixed[(*a, *b)];
        }
        projections.set(projections.get() + 1);
        Ok(true)
    };
    let y0 = vec![0.0; m + tri.len()];
    let (ys, stats) = integrate(rhs, 0.0, &y0, times, &opts.ode, hook)?;
    let mut states = Vec::with_capacity(times.len());
    let mut mean_x = Vec::with_capacity(times.len());
    let mut cov_x = Vec::with_capacity(times.len());
    for (t, y) in times.iter().zip(&ys) {
        let (mu, cov) = unpack(y);
        let state = MomentState { t: *t, mu, cov };
        let (mx, cx) = population_moments(net, &state);
        mean_x.push(mx);
        cov_x.push(cx);
        states.push(state);
    }
    Ok(MomentSolution {
        states,
        mean_x,
        cov_x,
        diagnostics: MomentDiagnostics {
            negative_means: negative.get(),
            psd_projections: projections.get(),
            closure_fallbacks: fallbacks.get(),
            clamped_evaluations: clamped.get(),
            ode: stats,
        },
    })
}
