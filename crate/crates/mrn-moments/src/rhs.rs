use mrn_network::{Convexity, ReactionNetwork};

use crate::closure::{check_shape, is_symmetric, MomentClosure};
use crate::derivatives::{derivatives_with, stoich_rows};
use crate::MomentError;

/// Right-hand side of the truncated mean/covariance equations of the DA
/// process,
///
/// ```text
/// dμ_m/dt    = α_m(μ) + T_m
/// T_m        = ½ Σ h_{m,ab} c_ab + ⅙ Σ h_{m,abc} c_abc
/// dc_mm′/dt  = (α_m + T_m) δ_mm′ + Σ_a (h_{m′,a} c_ma + h_{m,a} c_m′a)
///              + ½ Σ (h_{m′,ab} c_mab + h_{m,ab} c_m′ab)
///              + ⅙ Σ (h_{m′,abc} c_mabc + h_{m,abc} c_m′abc)
/// ```
///
/// with the higher central moments `c_abc`, `c_mabc` supplied by a closure.
/// With the Jensen correction, `T_m` is replaced by `max{0, T_m}` for every
/// propensity flagged convex.
pub struct MomentSystem<'a> {
    net: &'a ReactionNetwork,
    x0: Vec<f64>,
    s_rows: Vec<Vec<f64>>,
    convex: Vec<bool>,
    closure: &'a dyn MomentClosure,
    jensen: bool,
}

/// Evaluated right-hand side plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsTerms {
    pub dmu: Vec<f64>,
    /// Full symmetric `M × M` derivative of the covariance.
    pub dcov: Vec<f64>,
    /// Correction terms `T_m` actually used.
    pub correction: Vec<f64>,
    /// Number of corrections clamped to zero.
    pub clamped: usize,
    pub fallbacks: usize,
}

impl<'a> MomentSystem<'a> {
    pub fn new(net: &'a ReactionNetwork, closure: &'a dyn MomentClosure, jensen: bool) -> Self {
        MomentSystem {
            net,
            x0: net.x0().iter().map(|v| *v as f64).collect(),
            s_rows: stoich_rows(net),
            convex: (0..net.n_reactions()).map(|m| net.convexity(m) == Convexity::Convex).collect(),
            closure,
            jensen,
        }
    }

    pub fn n_reactions(&self) -> usize {
        self.net.n_reactions()
    }

    pub fn rhs(&self, mu: &[f64], cov: &[f64]) -> Result<RhsTerms, MomentError> {
        let m = self.net.n_reactions();
        if mu.len() != m {
            return Err(MomentError::InvalidArgument(format!("{} means for {m} reactions", mu.len())));
        }
        check_shape(mu, cov)?;
        let hm = self.closure.higher_moments(mu, cov)?;
        if let Some(t) = &hm.third {
            if t.len() != m * m * m || !is_symmetric(t, m, 3) {
                return Err(MomentError::NonSymmetricClosure);
            }
        }
        if let Some(t) = &hm.fourth {
            if t.len() != m * m * m * m || !is_symmetric(t, m, 4) {
                return Err(MomentError::NonSymmetricClosure);
            }
        }
        let order = if hm.third_derivatives { 3 } else { 2 };
        let d = derivatives_with(self.net, &self.x0, &self.s_rows, mu, order);
        let mm = m * m;

        let mut correction = vec![0.0; m];
        let mut clamped = 0;
        let mut e_alpha = vec![0.0; m];
        for k in 0..m {
            let mut t = 0.5 * d.second[k].iter().zip(cov).map(|(h, c)| h * c).sum::<f64>();
            if let (3, Some(c3)) = (order, &hm.third) {
                t += d.third[k].iter().zip(c3).map(|(h, c)| h * c).sum::<f64>() / 6.0;
            }
            if self.jensen && self.convex[k] && t < 0.0 {
                t = 0.0;
                clamped += 1;
            }
            correction[k] = t;
            e_alpha[k] = d.value[k] + t;
        }

        let mut dcov = vec![0.0; mm];
        for a in 0..m {
            for b in a..m {
                let mut v = if a == b { e_alpha[a] } else { 0.0 };
                for j in 0..m {
                    v += d.first[b][j] * cov[a * m + j] + d.first[a][j] * cov[b * m + j];
                }
                if let Some(c3) = &hm.third {
                    // ½ Σ_jk h_{b,jk} c_ajk + h_{a,jk} c_bjk
                    let (ra, rb) = (&c3[a * mm..(a + 1) * mm], &c3[b * mm..(b + 1) * mm]);
                    let s: f64 = d.second[b].iter().zip(ra).map(|(h, c)| h * c).sum::<f64>()
                        + d.second[a].iter().zip(rb).map(|(h, c)| h * c).sum::<f64>();
                    v += 0.5 * s;
                }
                if let (3, Some(c4)) = (order, &hm.fourth) {
                    let m3 = mm * m;
                    let (ra, rb) = (&c4[a * m3..(a + 1) * m3], &c4[b * m3..(b + 1) * m3]);
                    let s: f64 = d.third[b].iter().zip(ra).map(|(h, c)| h * c).sum::<f64>()
                        + d.third[a].iter().zip(rb).map(|(h, c)| h * c).sum::<f64>();
                    v += s / 6.0;
                }
                dcov[a * m + b] = v;
                dcov[b * m + a] = v;
            }
        }
        if e_alpha.iter().chain(&dcov).any(|v| !v.is_finite()) {
            return Err(MomentError::NonFinite(f64::NAN));
        }
        Ok(RhsTerms { dmu: e_alpha, dcov, correction, clamped, fallbacks: hm.fallbacks })
    }
}

/// `(dμ_Z/dt, dC_Z/dt)` without correction.
pub fn moment_rhs(
    net: &ReactionNetwork,
    mu: &[f64],
    cov: &[f64],
    closure: &dyn MomentClosure,
) -> Result<(Vec<f64>, Vec<f64>), MomentError> {
    let r = MomentSystem::new(net, closure, false).rhs(mu, cov)?;
    Ok((r.dmu, r.dcov))
}

/// `(dμ_Z/dt, dC_Z/dt)` with `T_m ← max{0, T_m}` for convex propensities.
pub fn jensen_corrected_rhs(
    net: &ReactionNetwork,
    mu: &[f64],
    cov: &[f64],
    closure: &dyn MomentClosure,
) -> Result<(Vec<f64>, Vec<f64>), MomentError> {
    let r = MomentSystem::new(net, closure, true).rhs(mu, cov)?;
    Ok((r.dmu, r.dcov))
}
