//! Macroscopic (fluctuation-free) limit and linear noise approximation.
//!
//! With a system size `Ω` and propensities scaled as
//! `α_m(z; Ω) = f(Ω) [α̃_m(z/Ω) + Ω⁻¹ α̃′_m(z/Ω)]`, the DA density obeys
//! `Z/Ω ≈ ζ(t) + Ω^{-1/2} Ξ(t)`, where `ζ` solves `dζ/dt = α̃(ζ)` and the
//! Gaussian noise `Ξ` has covariance from a Lyapunov equation driven by
//! the Jacobian `G = ∂α̃/∂ζ` and the diffusion `A = diag α̃(ζ)`. The
//! approximation is only meaningful when the macroscopic solution is
//! asymptotically stable; [`check_lna_validity`] reports on this.

mod error;
mod lna;
mod scaling;
mod validity;

pub use error::LnaError;
pub use lna::{
    integrate_lna_covariance, integrate_macroscopic, LnaOptions, LnaSolution, LnaState, MacroscopicSolution,
};
pub use scaling::{scaled_propensities, ScaledNetwork, ScalingRule};
pub use validity::{check_lna_validity, gaussian_marginal_pmf, LnaValidity, NEGATIVE_MASS_TOL};
