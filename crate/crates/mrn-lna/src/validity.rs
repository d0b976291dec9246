use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::LnaSolution;
use mrn_network::ReactionNetwork;

/// Lower-tail mass above which a Gaussian marginal is flagged for
/// predicting impossible populations.
pub const NEGATIVE_MASS_TOL: f64 = 1e-3;

/// Diagnostics on a linear-noise solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LnaValidity {
    /// Largest real part of the Jacobian spectrum at each output time,
    /// restricted to the stoichiometric subspace.
    pub max_re_eigenvalue: Vec<f64>,
    /// Largest real part of the full `M × M` DA Jacobian at each time
    /// (includes the structural zero eigenvalues when `M > rank S`).
    pub max_re_eigenvalue_full: Vec<f64>,
    /// Output times at which the spectrum has a nonnegative real part.
    pub unstable_times: Vec<f64>,
    /// Largest Gaussian mass below the lower bound of each species.
    pub lower_tail_mass: Vec<f64>,
    /// Smallest eigenvalue of `C_Ξ` over the grid.
    pub min_covariance_eigenvalue: f64,
}

impl LnaValidity {
    pub fn stable(&self) -> bool {
        self.unstable_times.is_empty()
    }

    pub fn negative_mass_flag(&self) -> bool {
        self.lower_tail_mass.iter().any(|m| *m > NEGATIVE_MASS_TOL)
    }

    pub fn is_valid(&self) -> bool {
        self.stable() && !self.negative_mass_flag()
    }

    pub fn max_re(&self) -> f64 {
        self.max_re_eigenvalue.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Orthonormal basis of the column space of `S` (`N × r`).
fn range_basis(s_rows: &[Vec<f64>], m: usize) -> DMatrix<f64> {
    let n = s_rows.len();
    let s = DMatrix::from_fn(n, m, |i, j| s_rows[i][j]);
    if n == 0 || m == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = s.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let top = svd.singular_values.max();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 1e-10 * top.max(1.0)).collect();
    DMatrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])])
}

/// Largest real part of the spectrum of the DA Jacobian `G` on the
/// dynamically relevant subspace.
///
/// `G = J S` with `J = ∂π̃/∂x̃`, so every direction in the kernel of `S`
/// contributes a structural zero eigenvalue, and so does every
/// conservation law. The remaining spectrum is that of `S J` restricted to
/// the column space of `S`, which is invariant under `S J`; it is computed
/// as the spectrum of `Qᵀ S J Q` with `Q` an orthonormal basis of that
/// space.
pub(crate) fn reduced_spectrum_max_re(s_rows: &[Vec<f64>], g: &[f64], m: usize) -> f64 {
    let q = range_basis(s_rows, m);
    let r = q.ncols();
    if r == 0 {
        return f64::NEG_INFINITY;
    }
    // S J Q = S (J S) pinv-free: J Q is recovered from G because Q = S W for
    // some W, hence J Q = J S W = G W.
    let n = s_rows.len();
    let s = DMatrix::from_fn(n, m, |i, j| s_rows[i][j]);
    let gm = DMatrix::from_row_slice(m, m, g);
    let w = s.clone().pseudo_inverse(1e-12).expect("pseudo-inverse of S") * &q;
    let reduced = q.transpose() * &s * gm * w;
    reduced.complex_eigenvalues().iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max)
}

fn full_spectrum_max_re(g: &[f64], m: usize) -> f64 {
    if m == 0 {
        return f64::NEG_INFINITY;
    }
    DMatrix::from_row_slice(m, m, g).complex_eigenvalues().iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Checks asymptotic stability along the macroscopic solution and the
/// Gaussian mass that falls below the population lower bounds.
pub fn check_lna_validity(net: &ReactionNetwork, sol: &LnaSolution) -> LnaValidity {
    let (n, m) = (net.n_species(), net.n_reactions());
    let s_rows: Vec<Vec<f64>> = (0..n).map(|i| (0..m).map(|k| net.stoich(k)[i] as f64).collect()).collect();
    let lower = net.lower_bounds();
    let mut report = LnaValidity {
        max_re_eigenvalue: Vec::new(),
        max_re_eigenvalue_full: Vec::new(),
        unstable_times: Vec::new(),
        lower_tail_mass: vec![0.0; n],
        min_covariance_eigenvalue: f64::INFINITY,
    };
    for (i, st) in sol.states.iter().enumerate() {
        let re = reduced_spectrum_max_re(&s_rows, &st.jacobian, m);
        let scale = st.jacobian.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        if re >= -1e-10 * scale {
            report.unstable_times.push(st.t);
        }
        report.max_re_eigenvalue.push(re);
        report.max_re_eigenvalue_full.push(full_spectrum_max_re(&st.jacobian, m));
        if m > 0 {
            let c = DMatrix::from_row_slice(m, m, &st.cov_xi);
            report.min_covariance_eigenvalue = report.min_covariance_eigenvalue.min(c.symmetric_eigenvalues().min());
        }
        for k in 0..n {
            let mean = sol.mean_x[i][k];
            let sd = sol.std_x(i, k);
            let mass = if sd > 0.0 {
                Normal::new(mean, sd).map(|d| d.cdf(lower[k] as f64 - 0.5)).unwrap_or(0.0)
            } else if mean < lower[k] as f64 - 0.5 {
                1.0
            } else {
                0.0
            };
            report.lower_tail_mass[k] = report.lower_tail_mass[k].max(mass);
        }
    }
    report
}

/// Discretizes a Gaussian marginal onto the integers `lo..=hi`: each point
/// receives the mass of `[x − ½, x + ½)`, renormalized over the support.
pub fn gaussian_marginal_pmf(mean: f64, variance: f64, lo: i64, hi: i64) -> Vec<f64> {
    let len = (hi - lo + 1).max(0) as usize;
    let mut p = vec![0.0; len];
    if len == 0 {
        return p;
    }
    if !(variance > 0.0) {
        let k = (mean.round() as i64).clamp(lo, hi);
        p[(k - lo) as usize] = 1.0;
        return p;
    }
    let d = Normal::new(mean, variance.sqrt()).expect("positive standard deviation");
    for (i, v) in p.iter_mut().enumerate() {
        let x = (lo + i as i64) as f64;
        *v = d.cdf(x + 0.5) - d.cdf(x - 0.5);
    }
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|v| *v /= total);
    }
    p
}
