use mrn_moments::ode::{integrate, OdeOptions, OdeStats};
use mrn_network::{Jet, ReactionNetwork};

use crate::scaling::{scaled_propensities, ScaledNetwork};
use crate::validity::reduced_spectrum_max_re;
use crate::LnaError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnaOptions {
    pub ode: OdeOptions,
    /// Largest tolerated `max_m |ζ_m|` before the macroscopic solution is
    /// declared to blow up.
    pub zeta_cap: f64,
    /// Largest tolerated trace of `C_Ξ`.
    pub covariance_cap: f64,
}

impl Default for LnaOptions {
    fn default() -> Self {
        LnaOptions { ode: OdeOptions::default(), zeta_cap: 1e8, covariance_cap: 1e12 }
    }
}

/// Macroscopic DA densities `ζ(t)` and population densities
/// `χ(t) = x₀/Ω + S ζ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroscopicSolution {
    pub omega: f64,
    pub times: Vec<f64>,
    pub zeta: Vec<Vec<f64>>,
    pub chi: Vec<Vec<f64>>,
    pub stats: OdeStats,
}

/// Linear-noise state at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct LnaState {
    pub t: f64,
    pub zeta: Vec<f64>,
    /// Noise covariance `C_Ξ` (row-major `M × M`).
    pub cov_xi: Vec<f64>,
    /// Diagonal of the diffusion matrix `A = diag(α̃(ζ))`.
    pub diffusion: Vec<f64>,
    /// Jacobian `G = ∂α̃/∂ζ` (row-major `M × M`).
    pub jacobian: Vec<f64>,
}

/// Gaussian laws implied by the linear noise approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct LnaSolution {
    pub omega: f64,
    pub states: Vec<LnaState>,
    pub chi: Vec<Vec<f64>>,
    /// `Ω ζ` and `Ω C_Ξ`.
    pub mean_z: Vec<Vec<f64>>,
    pub cov_z: Vec<Vec<f64>>,
    /// `x₀ + Ω S ζ` and `Ω S C_Ξ Sᵀ`.
    pub mean_x: Vec<Vec<f64>>,
    pub cov_x: Vec<Vec<f64>>,
    pub stats: OdeStats,
}

impl LnaSolution {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn std_x(&self, i: usize, n: usize) -> f64 {
        let dim = self.mean_x[i].len();
        self.cov_x[i][n * dim + n].max(0.0).sqrt()
    }
}

struct Model<'a> {
    scaled: ScaledNetwork<'a>,
    x0t: Vec<f64>,
    s_rows: Vec<Vec<f64>>,
}

impl<'a> Model<'a> {
    fn new(net: &'a ReactionNetwork, omega: f64) -> Result<Self, LnaError> {
        let scaled = scaled_propensities(net, omega)?;
        Ok(Model {
            scaled,
            x0t: net.x0().iter().map(|v| *v as f64 / omega).collect(),
            s_rows: (0..net.n_species())
                .map(|n| (0..net.n_reactions()).map(|m| net.stoich(m)[n] as f64).collect())
                .collect(),
        })
    }

    fn chi(&self, zeta: &[f64]) -> Vec<f64> {
        self.x0t.iter().zip(&self.s_rows).map(|(c, row)| c + row.iter().zip(zeta).map(|(s, z)| s * z).sum::<f64>()).collect()
    }

    fn alpha(&self, zeta: &[f64]) -> Vec<f64> {
        self.scaled.density_propensities(&self.chi(zeta))
    }

    /// `(α̃(ζ), G(ζ))`.
    fn alpha_jacobian(&self, zeta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let xj: Vec<Jet> = self.x0t.iter().zip(&self.s_rows).map(|(c, row)| Jet::affine(1, *c, row, zeta)).collect();
        let jets = self.scaled.density_propensities(&xj);
        let m = zeta.len();
        let mut g = vec![0.0; m * m];
        for (k, j) in jets.iter().enumerate() {
            g[k * m..(k + 1) * m].copy_from_slice(&j.g);
        }
        (jets.iter().map(|j| j.v).collect(), g)
    }
}

fn check_times(times: &[f64]) -> Result<(), LnaError> {
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(LnaError::InvalidArgument("output times must be finite and nonnegative".into()));
    }
    Ok(())
}

/// Integrates `dζ/dt = α̃(ζ)`, `ζ(0) = 0`.
pub fn integrate_macroscopic(
    net: &ReactionNetwork,
    omega: f64,
    times: &[f64],
    opts: &LnaOptions,
) -> Result<MacroscopicSolution, LnaError> {
    check_times(times)?;
    let model = Model::new(net, omega)?;
    let m = net.n_reactions();
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| -> Result<(), LnaError> {
        dy.copy_from_slice(&model.alpha(y));
        Ok(())
    };
    let cap = opts.zeta_cap;
    let hook = |t: f64, y: &mut [f64]| -> Result<bool, LnaError> {
        let norm = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if norm > cap {
            return Err(LnaError::BlowUp { t, norm });
        }
        Ok(false)
    };
    let (zeta, stats) = integrate(rhs, 0.0, &vec![0.0; m], times, &opts.ode, hook)?;
    let chi = zeta.iter().map(|z| model.chi(z)).collect();
    Ok(MacroscopicSolution { omega, times: times.to_vec(), zeta, chi, stats })
}

/// Integrates the macroscopic equations together with the Lyapunov equation
/// `dC_Ξ/dt = A + G C_Ξ + C_Ξ Gᵀ`, `C_Ξ(0) = 0`, and returns the Gaussian
/// laws of `Z` and `X` at every output time.
pub fn integrate_lna_covariance(
    net: &ReactionNetwork,
    omega: f64,
    times: &[f64],
    opts: &LnaOptions,
) -> Result<LnaSolution, LnaError> {
    check_times(times)?;
    let model = Model::new(net, omega)?;
    let m = net.n_reactions();
    let tri: Vec<(usize, usize)> = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
    let unpack = |y: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; m * m];
        for (k, (a, b)) in tri.iter().enumerate() {
            c[a * m + b] = y[m + k];
            c[b * m + a] = y[m + k];
        }
        c
    };
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| -> Result<(), LnaError> {
        let (alpha, g) = model.alpha_jacobian(&y[..m]);
        let c = unpack(y);
        dy[..m].copy_from_slice(&alpha);
        for (k, (a, b)) in tri.iter().enumerate() {
            let mut v = if a == b { alpha[*a] } else { 0.0 };
            for j in 0..m {
                v += g[a * m + j] * c[j * m + b] + c[a * m + j] * g[b * m + j];
            }
            dy[m + k] = v;
        }
        Ok(())
    };
    let (zcap, ccap) = (opts.zeta_cap, opts.covariance_cap);
    let hook = |t: f64, y: &mut [f64]| -> Result<bool, LnaError> {
        let norm = y[..m].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if norm > zcap {
            return Err(LnaError::BlowUp { t, norm });
        }
        let trace: f64 = (0..m).map(|a| y[m + tri.iter().position(|p| *p == (a, a)).unwrap_or(0)]).sum();
        if trace > ccap {
            let (_, g) = model.alpha_jacobian(&y[..m]);
            return Err(LnaError::CovarianceBlowUp {
                t,
                trace,
                max_re_eigenvalue: reduced_spectrum_max_re(&model.s_rows, &g, m),
            });
        }
        Ok(false)
    };
    let (ys, stats) = integrate(rhs, 0.0, &vec![0.0; m + tri.len()], times, &opts.ode, hook)?;

    let n = net.n_species();
    let x0: Vec<f64> = net.x0().iter().map(|v| *v as f64).collect();
    let mut out = LnaSolution {
        omega,
        states: Vec::with_capacity(times.len()),
        chi: Vec::new(),
        mean_z: Vec::new(),
        cov_z: Vec::new(),
        mean_x: Vec::new(),
        cov_x: Vec::new(),
        stats,
    };
    for (t, y) in times.iter().zip(&ys) {
        let zeta = y[..m].to_vec();
        let c = unpack(y);
        let (alpha, g) = model.alpha_jacobian(&zeta);
        let chi = model.chi(&zeta);
        let mean_x: Vec<f64> = x0
            .iter()
            .zip(&model.s_rows)
            .map(|(x, row)| x + omega * row.iter().zip(&zeta).map(|(s, z)| s * z).sum::<f64>())
            .collect();
        let mut cov_x = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut v = 0.0;
                for a in 0..m {
                    if model.s_rows[i][a] == 0.0 {
                        continue;
                    }
                    for b in 0..m {
                        v += model.s_rows[i][a] * c[a * m + b] * model.s_rows[j][b];
                    }
                }
                cov_x[i * n + j] = omega * v;
                cov_x[j * n + i] = omega * v;
            }
        }
        out.mean_z.push(zeta.iter().map(|z| omega * z).collect());
        out.cov_z.push(c.iter().map(|v| omega * v).collect());
        out.chi.push(chi);
        out.mean_x.push(mean_x);
        out.cov_x.push(cov_x);
        out.states.push(LnaState { t: *t, zeta, cov_xi: c, diffusion: alpha, jacobian: g });
    }
    Ok(out)
}
