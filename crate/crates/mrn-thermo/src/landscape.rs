//! Potential-energy landscape `V(x̃; Ω) = −Ω⁻¹ ln[p̄(x̃)/p̄(x̃*)]` of a
//! stationary distribution and the state energies `E(x) = −Ω⁻¹ ln p̄(x)`.

use crate::ThermoError;

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLandscape {
    pub omega: f64,
    /// `E(x) = −Ω⁻¹ ln p̄(x)` (+∞ where `p̄ = 0`).
    pub energy: Vec<f64>,
    /// `V(x) = E(x) − E(x*) ≥ 0`, zero at the ground state.
    pub potential: Vec<f64>,
    /// Index of the most probable state `x*`.
    pub ground_state: usize,
    /// Partition function `ζ(Ω) = Σ exp(−Ω V(x))`.
    pub partition: f64,
}

impl EnergyLandscape {
    /// Gibbs form `exp(−Ω V(x)) / ζ(Ω)`.
    pub fn gibbs(&self) -> Vec<f64> {
        self.potential.iter().map(|v| (-self.omega * v).exp() / self.partition).collect()
    }

    /// Maximum absolute difference between the Gibbs form and `p`.
    pub fn reconstruction_error(&self, p: &[f64]) -> f64 {
        self.gibbs().iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Energies and potential landscape of the stationary distribution `p_bar`.
pub fn state_energy_landscape(p_bar: &[f64], omega: f64) -> Result<EnergyLandscape, ThermoError> {
    if p_bar.is_empty() {
        return Err(ThermoError::InvalidArgument("empty distribution".into()));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(ThermoError::InvalidArgument(format!("Ω must be positive, got {omega}")));
    }
    if p_bar.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(ThermoError::InvalidArgument("probabilities must be finite and nonnegative".into()));
    }
    let sum: f64 = p_bar.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ThermoError::NotNormalized { sum });
    }
    let ground_state = p_bar
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > p_bar[best] { i } else { best });
    let p_star = p_bar[ground_state];
    let energy: Vec<f64> = p_bar.iter().map(|p| -p.ln() / omega).collect();
    let potential: Vec<f64> = p_bar.iter().map(|p| -(p / p_star).ln() / omega).collect();
    let partition = potential.iter().map(|v| (-omega * v).exp()).sum();
    Ok(EnergyLandscape { omega, energy, potential, ground_state, partition })
}

/// Two-size Richardson estimate of the leading landscape term
/// `V₀ ≈ (Ω_b V_b − Ω_a V_a)/(Ω_b − Ω_a)`, assuming `V(Ω) = V₀ + V₁/Ω`.
/// The result is an estimate only; it is exact when the higher-order terms vanish.
pub fn richardson_v0(v_a: f64, omega_a: f64, v_b: f64, omega_b: f64) -> Result<f64, ThermoError> {
    if omega_a == omega_b || !(omega_a > 0.0 && omega_b > 0.0) {
        return Err(ThermoError::InvalidArgument("Richardson extrapolation needs two distinct positive sizes".into()));
    }
    Ok((omega_b * v_b - omega_a * v_a) / (omega_b - omega_a))
}
