//! Maximum-entropy (MaxEnt) reconstruction of a univariate marginal from
//! its first `K` moments.
//!
//! On a finite integer support the entropy maximizer subject to
//! `E[X^k] = m_k`, `k = 1..K`, is the Gibbs law
//! `p(x) = exp(−Σ_k λ_k x^k) / ζ`. The multipliers minimize the convex dual
//! `ln ζ(λ) + Σ_k λ_k m_k`, solved here by damped Newton iterations on
//! standardized coordinates.

mod fit;
mod geometric;

pub use fit::{interior_modes, 
    check_moment_feasibility, fit_maxent_distribution, moments_from_pmf, moments_from_samples, FitOptions, MaxEntModel,
    Support,
};
pub use geometric::{geometric_maxent, GeometricMaxEnt};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxEntError {
    #[error("mean must be nonnegative, got {0}")]
    NegativeMean(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("moments are not attainable on the support: {0}")]
    Infeasible(String),
    #[error("no maximum-entropy solution found after {iterations} iterations (moment residual {residual:e})")]
    NoSolution { iterations: usize, residual: f64 },
    #[error(
        "dual Hessian condition number {condition:e} exceeds 1e12 at order {order}; use fewer moments or rescale them"
    )]
    IllConditioned { condition: f64, order: usize },
}

/// Shannon entropy `−Σ p ln p` (nats).
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}
