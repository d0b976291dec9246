//! System-size scaling `π_m(x; Ω) = f(Ω) [π̃_m(x/Ω) + Ω⁻¹ π̃′_m(x/Ω)]`.

use mrn_network::{Propensity, ReactionNetwork, Scalar};

use crate::LnaError;

/// How the density propensity of one reaction is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingRule {
    /// Mass action of total order `r`: `f = Ω`,
    /// `π̃(x̃) = κ Ω^{r−1} ∏ x̃_n^{ν_n} / ν_n!` (the leading falling-factorial
    /// term); `π̃′` collects the remaining lower-order terms.
    MassAction { order: u32 },
    /// Kinds whose parameters are already expressed per individual
    /// (opinion, neural, saturating kinetics): `f = Ω`, `π̃(x̃) = π(Ω x̃)/Ω`
    /// and `π̃′ = 0`.
    Intensive,
}

/// Scaled propensities of a network for one system size `Ω`.
#[derive(Debug, Clone)]
pub struct ScaledNetwork<'a> {
    net: &'a ReactionNetwork,
    omega: f64,
    rules: Vec<ScalingRule>,
}

/// Declares the scaling of every propensity of `net` at system size `omega`.
pub fn scaled_propensities(net: &ReactionNetwork, omega: f64) -> Result<ScaledNetwork<'_>, LnaError> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(LnaError::InvalidArgument(format!("system size must be positive, got {omega}")));
    }
    let rules = net
        .reactions()
        .iter()
        .enumerate()
        .map(|(m, r)| match r.propensity {
            Propensity::MassAction { .. } => Ok(ScalingRule::MassAction { order: r.reactants.iter().sum() }),
            Propensity::Hyperbolic { .. }
            | Propensity::MichaelisMenten { .. }
            | Propensity::OpinionExp { .. }
            | Propensity::NeuralTanh { .. } => Ok(ScalingRule::Intensive),
            Propensity::Tabulated { .. } => {
                Err(LnaError::UnscaledPropensity { reaction: m, kind: r.propensity.kind_name() })
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(ScaledNetwork { net, omega, rules })
}

impl<'a> ScaledNetwork<'a> {
    pub fn network(&self) -> &'a ReactionNetwork {
        self.net
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The positive factor `f(Ω)`; every declared rule uses `f(Ω) = Ω`.
    pub fn factor(&self) -> f64 {
        self.omega
    }

    pub fn rules(&self) -> &[ScalingRule] {
        &self.rules
    }

    /// Leading density propensities `π̃_m(x̃)`.
    pub fn density_propensities<S: Scalar>(&self, xt: &[S]) -> Vec<S> {
        let om = self.omega;
        self.net
            .reactions()
            .iter()
            .zip(&self.rules)
            .map(|(r, rule)| match (rule, &r.propensity) {
                (ScalingRule::MassAction { order }, Propensity::MassAction { k }) => {
                    let mut acc = S::constant(k * om.powi(*order as i32 - 1), &xt[0]);
                    for (n, &nu) in r.reactants.iter().enumerate() {
                        let mut fact = 1.0;
                        for j in 0..nu {
                            acc = acc.mul(&xt[n]);
                            fact *= (j + 1) as f64;
                        }
                        if nu > 1 {
                            acc = acc.scale(1.0 / fact);
                        }
                    }
                    acc
                }
                _ => {
                    let x: Vec<S> = xt.iter().map(|v| v.scale(om)).collect();
                    r.propensity.eval(&x, &r.reactants).scale(1.0 / om)
                }
            })
            .collect()
    }

    /// Correction densities `π̃′_m(x̃) = Ω [π_m(Ω x̃)/f(Ω) − π̃_m(x̃)]`. For
    /// mass action of order `r ≤ 2` this is independent of `Ω`; higher
    /// orders carry their `O(Ω⁻²)` terms here as well.
    pub fn correction_propensities(&self, xt: &[f64]) -> Vec<f64> {
        let x: Vec<f64> = xt.iter().map(|v| v * self.omega).collect();
        let full = self.net.propensities_real(&x);
        let lead = self.density_propensities(xt);
        full.iter()
            .zip(&lead)
            .zip(&self.rules)
            .map(|((p, l), rule)| match rule {
                ScalingRule::MassAction { .. } => self.omega * (p / self.factor() - l),
                ScalingRule::Intensive => 0.0,
            })
            .collect()
    }

    /// `α_m(z; Ω)` reassembled from the scaled parts.
    pub fn reassembled(&self, z: &[f64]) -> Vec<f64> {
        let xt: Vec<f64> = self.net.da_to_population_real(z).iter().map(|v| v / self.omega).collect();
        let lead = self.density_propensities(&xt);
        let corr = self.correction_propensities(&xt);
        lead.iter().zip(&corr).map(|(a, b)| self.factor() * (a + b / self.omega)).collect()
    }
}
