//! Closures expressing third (and optionally fourth) central moments of the
//! DA process through its means and covariances.

use crate::MomentError;

/// Higher central moments supplied to the moment equations. `None` means
/// identically zero. Tensors are dense, row-major and fully symmetric.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HigherMoments {
    pub third: Option<Vec<f64>>,
    pub fourth: Option<Vec<f64>>,
    /// Whether third-order propensity derivatives enter the equations.
    pub third_derivatives: bool,
    /// Entries that fell back to the normal value (zero) because the closure
    /// is undefined there.
    pub fallbacks: usize,
}

pub trait MomentClosure: Send + Sync {
    fn name(&self) -> &'static str;
    /// Central moments of order 3 and 4 implied by the means `mu` and the
    /// covariance matrix `cov` (row-major `M × M`).
    fn higher_moments(&self, mu: &[f64], cov: &[f64]) -> Result<HigherMoments, MomentError>;
}

/// Normal closure: third and fourth central-moment terms vanish, which
/// leaves the mean/covariance equations driven only by first and second
/// propensity derivatives.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormalClosure;

impl MomentClosure for NormalClosure {
    fn name(&self) -> &'static str {
        "normal"
    }

    fn higher_moments(&self, _: &[f64], _: &[f64]) -> Result<HigherMoments, MomentError> {
        Ok(HigherMoments::default())
    }
}

/// Log-normal closure: raw third moments follow
/// `E[Z_a Z_b Z_c] = E[Z_a Z_b] E[Z_a Z_c] E[Z_b Z_c] / (E[Z_a] E[Z_b] E[Z_c])`,
/// fourth-order terms are dropped, and third-order propensity derivatives
/// are neglected. Triples involving a nonpositive mean (for instance at
/// `t = 0`, or for reactions that never fire) use the normal value zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct LognormalClosure;

impl MomentClosure for LognormalClosure {
    fn name(&self) -> &'static str {
        "lognormal"
    }

    fn higher_moments(&self, mu: &[f64], cov: &[f64]) -> Result<HigherMoments, MomentError> {
        let m = mu.len();
        let mut third = vec![0.0; m * m * m];
        let mut fallbacks = 0;
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    let v = if mu[a] > 0.0 && mu[b] > 0.0 && mu[c] > 0.0 {
                        let raw = lognormal_raw(mu, cov, a, b, c);
                        central_from_raw(mu, cov, a, b, c, raw)
                    } else {
                        fallbacks += 1;
                        0.0
                    };
                    for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        third[(i * m + j) * m + k] = v;
                    }
                }
            }
        }
        Ok(HigherMoments { third: Some(third), fourth: None, third_derivatives: false, fallbacks })
    }
}

/// Closure selector for configuration files and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureKind {
    #[default]
    Normal,
    Lognormal,
}

impl ClosureKind {
    pub fn closure(self) -> Box<dyn MomentClosure> {
        match self {
            ClosureKind::Normal => Box::new(NormalClosure),
            ClosureKind::Lognormal => Box::new(LognormalClosure),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClosureKind::Normal => "normal",
            ClosureKind::Lognormal => "lognormal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "normal" => Some(ClosureKind::Normal),
            "lognormal" => Some(ClosureKind::Lognormal),
            _ => None,
        }
    }
}

fn second_raw(mu: &[f64], cov: &[f64], a: usize, b: usize) -> f64 {
    cov[a * mu.len() + b] + mu[a] * mu[b]
}

fn lognormal_raw(mu: &[f64], cov: &[f64], a: usize, b: usize, c: usize) -> f64 {
    second_raw(mu, cov, a, b) * second_raw(mu, cov, a, c) * second_raw(mu, cov, b, c) / (mu[a] * mu[b] * mu[c])
}

fn central_from_raw(mu: &[f64], cov: &[f64], a: usize, b: usize, c: usize, raw: f64) -> f64 {
    raw - mu[a] * second_raw(mu, cov, b, c) - mu[b] * second_raw(mu, cov, a, c) - mu[c] * second_raw(mu, cov, a, b)
        + 2.0 * mu[a] * mu[b] * mu[c]
}

/// Raw third moments `E[Z_a Z_b Z_c]` under the log-normal relation
/// (dense `M³` tensor). Fails when a mean is not positive.
pub fn lognormal_third_moments(mu: &[f64], cov: &[f64]) -> Result<Vec<f64>, MomentError> {
    check_shape(mu, cov)?;
    if let Some((index, value)) = mu.iter().copied().enumerate().find(|(_, v)| !(*v > 0.0)) {
        return Err(MomentError::ZeroMean { index, value });
    }
    let m = mu.len();
    let mut out = vec![0.0; m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                out[(a * m + b) * m + c] = lognormal_raw(mu, cov, a, b, c);
            }
        }
    }
    Ok(out)
}

/// Converts raw third moments to central ones:
/// `κ_abc = E[abc] − μ_a E[bc] − μ_b E[ac] − μ_c E[ab] + 2 μ_a μ_b μ_c`.
pub fn third_central_from_raw(mu: &[f64], cov: &[f64], raw: &[f64]) -> Result<Vec<f64>, MomentError> {
    check_shape(mu, cov)?;
    let m = mu.len();
    if raw.len() != m * m * m {
        return Err(MomentError::InvalidArgument("raw moment tensor has the wrong size".into()));
    }
    let mut out = vec![0.0; m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let i = (a * m + b) * m + c;
                out[i] = central_from_raw(mu, cov, a, b, c, raw[i]);
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_shape(mu: &[f64], cov: &[f64]) -> Result<(), MomentError> {
    if cov.len() != mu.len() * mu.len() {
        return Err(MomentError::InvalidArgument(format!(
            "covariance has {} entries for {} means",
            cov.len(),
            mu.len()
        )));
    }
    Ok(())
}

/// Checks full index symmetry of a dense tensor of the given `rank`.
pub(crate) fn is_symmetric(t: &[f64], m: usize, rank: u32) -> bool {
    let scale = t.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let tol = 1e-10 * scale;
    let idx = |ix: &[usize]| ix.iter().fold(0, |acc, i| acc * m + i);
    let total = m.pow(rank);
    let mut ix = vec![0usize; rank as usize];
    for flat in 0..total {
        let mut r = flat;
        for slot in ix.iter_mut().rev() {
            *slot = r % m;
            r /= m;
        }
        for p in 0..ix.len() - 1 {
            let mut sw = ix.clone();
            sw.swap(p, p + 1);
            if (t[flat] - t[idx(&sw)]).abs() > tol {
                return false;
            }
        }
    }
    true
}
