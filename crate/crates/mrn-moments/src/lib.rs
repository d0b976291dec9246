//! Moment approximation of the degree-of-advancement (DA) process.
//!
//! The means and covariances of `Z(t)` obey an open hierarchy of ODEs; a
//! [`MomentClosure`] expresses the third (and fourth) central moments
//! through lower ones, giving a closed system that [`integrate_moments`]
//! solves with the adaptive Dormand–Prince integrator in [`ode`].
//! Propensity derivatives are exact (Taylor jets), and the optional Jensen
//! correction keeps `E[α_m] ≥ α_m(μ)` for convex propensities.

mod closure;
mod derivatives;
mod error;
mod integrate;
pub mod ode;
mod rhs;

pub use closure::{
    lognormal_third_moments, third_central_from_raw, ClosureKind, HigherMoments, LognormalClosure, MomentClosure,
    NormalClosure,
};
pub use derivatives::{propensity_derivatives, PropensityDerivatives};
pub use error::MomentError;
pub use integrate::{
    integrate_moments, integrate_moments_with, population_moments, MomentDiagnostics, MomentOptions, MomentSolution,
    MomentState,
};
pub use rhs::{jensen_corrected_rhs, moment_rhs, MomentSystem, RhsTerms};
