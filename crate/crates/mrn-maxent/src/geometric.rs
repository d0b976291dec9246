use crate::MaxEntError;

/// MaxEnt law on the nonnegative integers given only the mean `μ`:
/// `p(x) = (1/(1+μ)) (μ/(1+μ))^x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricMaxEnt {
    pub mean: f64,
    /// Ratio `q = μ/(1+μ)`.
    pub ratio: f64,
}

pub fn geometric_maxent(mean: f64) -> Result<GeometricMaxEnt, MaxEntError> {
    if !mean.is_finite() {
        return Err(MaxEntError::InvalidArgument(format!("mean must be finite, got {mean}")));
    }
    if mean < 0.0 {
        return Err(MaxEntError::NegativeMean(mean));
    }
    Ok(GeometricMaxEnt { mean, ratio: mean / (1.0 + mean) })
}

impl GeometricMaxEnt {
    pub fn probability(&self, x: u64) -> f64 {
        if self.mean == 0.0 {
            return if x == 0 { 1.0 } else { 0.0 };
        }
        (1.0 - self.ratio) * self.ratio.powf(x as f64)
    }

    /// `Pr[X > x] = q^{x+1}`.
    pub fn tail(&self, x: u64) -> f64 {
        self.ratio.powf(x as f64 + 1.0)
    }

    /// Smallest `x` with `Pr[X > x] < tol`.
    pub fn support_for_tail(&self, tol: f64) -> u64 {
        if self.mean == 0.0 {
            return 0;
        }
        let x = (tol.ln() / self.ratio.ln() - 1.0).ceil().max(0.0) as u64;
        // guard against rounding of the logarithms
        (x.saturating_sub(1)..=x + 1).find(|&y| self.tail(y) < tol).unwrap_or(x + 1)
    }

    /// Probabilities on `0..=hi`.
    pub fn pmf(&self, hi: u64) -> Vec<f64> {
        (0..=hi).map(|x| self.probability(x)).collect()
    }

    /// Entropy `(1+μ) ln(1+μ) − μ ln μ`.
    pub fn entropy(&self) -> f64 {
        let m = self.mean;
        if m == 0.0 {
            0.0
        } else {
            (1.0 + m) * (1.0 + m).ln() - m * m.ln()
        }
    }
}
