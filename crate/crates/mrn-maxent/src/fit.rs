use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::MaxEntError;

/// Finite integer support `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support {
    pub lo: i64,
    pub hi: i64,
}

impl Support {
    pub fn new(lo: i64, hi: i64) -> Result<Self, MaxEntError> {
        if hi < lo {
            return Err(MaxEntError::InvalidArgument(format!("empty support {lo}..={hi}")));
        }
        Ok(Support { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Relative tolerance on the fitted raw moments.
    pub tol: f64,
    pub max_iterations: usize,
    /// Largest tolerated condition number of the dual Hessian.
    pub max_condition: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { tol: 1e-10, max_iterations: 500, max_condition: 1e12 }
    }
}

/// A fitted Gibbs law `p(x) = exp(−Σ_k λ_k x^k)/ζ` on a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntModel {
    pub order: usize,
    pub support: Support,
    /// Multipliers in raw coordinates (`λ_1..λ_K`).
    pub lambda: Vec<f64>,
    /// Multipliers for the standardized variable `(x − shift)/scale`.
    pub lambda_standardized: Vec<f64>,
    pub shift: f64,
    pub scale: f64,
    /// `ln ζ` in raw coordinates.
    pub log_partition: f64,
    /// Probabilities on `support.lo..=support.hi`.
    pub pmf: Vec<f64>,
    pub target_moments: Vec<f64>,
    pub fitted_moments: Vec<f64>,
    pub iterations: usize,
    /// Dual objective after every accepted Newton step (starting point first).
    pub dual_history: Vec<f64>,
    /// Condition number of the dual Hessian at the solution.
    pub condition: f64,
}

impl MaxEntModel {
    pub fn probability(&self, x: i64) -> f64 {
        if x < self.support.lo || x > self.support.hi {
            0.0
        } else {
            self.pmf[(x - self.support.lo) as usize]
        }
    }

    pub fn entropy(&self) -> f64 {
        crate::entropy(&self.pmf)
    }

    /// Largest relative mismatch between fitted and target raw moments.
    /// Each error is measured against `max(|m_k|, (|shift| + scale)^k)`, so
    /// that odd moments of nearly symmetric laws (targets close to zero) are
    /// judged on the scale of the distribution rather than of round-off.
    pub fn moment_error(&self) -> f64 {
        let unit = self.shift.abs() + self.scale;
        self.fitted_moments
            .iter()
            .zip(&self.target_moments)
            .enumerate()
            .map(|(k, (f, t))| (f - t).abs() / t.abs().max(unit.powi(k as i32 + 1)))
            .fold(0.0, f64::max)
    }

    /// Support points that are strict local maxima with a neighbor on each
    /// side; maxima pinned to the ends of the support are excluded.
    pub fn interior_modes(&self) -> Vec<i64> {
        interior_modes(&self.pmf, self.support.lo)
    }
}

/// Strict interior local maxima of a pmf listed from `lo` (plateaus count
/// once, at their left end).
pub fn interior_modes(pmf: &[f64], lo: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let n = pmf.len();
    let mut i = 1;
    while i + 1 < n {
        if pmf[i] > pmf[i - 1] {
            let mut j = i;
            while j + 1 < n && pmf[j + 1] == pmf[i] {
                j += 1;
            }
            if j + 1 < n && pmf[j + 1] < pmf[i] {
                out.push(lo + i as i64);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Raw moments `E[X^k]`, `k = 1..=order`, of a pmf on `lo..`.
pub fn moments_from_pmf(pmf: &[f64], lo: i64, order: usize) -> Vec<f64> {
    let mut m = vec![0.0; order];
    for (i, p) in pmf.iter().enumerate() {
        let x = (lo + i as i64) as f64;
        let mut pw = 1.0;
        for mk in m.iter_mut() {
            pw *= x;
            *mk += p * pw;
        }
    }
    m
}

/// Raw sample moments (optionally weighted; weights are normalized).
pub fn moments_from_samples(samples: &[f64], weights: Option<&[f64]>, order: usize) -> Vec<f64> {
    let mut m = vec![0.0; order];
    let mut total = 0.0;
    for (i, x) in samples.iter().enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        total += w;
        let mut pw = 1.0;
        for mk in m.iter_mut() {
            pw *= x;
            *mk += w * pw;
        }
    }
    m.iter_mut().for_each(|v| *v /= total);
    m
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `E[((X − c)/s)^k]` for `k = 1..=K` from raw moments.
fn standardize(raw: &[f64], c: f64, s: f64) -> Vec<f64> {
    let with0: Vec<f64> = std::iter::once(1.0).chain(raw.iter().copied()).collect();
    (1..=raw.len())
        .map(|k| {
            let central: f64 = (0..=k).map(|j| binom(k, j) * with0[j] * (-c).powi((k - j) as i32)).sum();
            central / s.powi(k as i32)
        })
        .collect()
}

/// Necessary conditions for the raw moments to come from a distribution on
/// `support`: the mean lies in the support, the variance is at least the
/// lattice minimum `f(1 − f)` (`f` the fractional part of the mean) and at
/// most `E[(X − lo)(hi − X)] ≥ 0` allows, and for `K ≥ 4` the Hankel
/// moment matrix (up to order 4, standardized) is positive semidefinite. Moments on
/// the boundary of the moment space (degenerate laws) are rejected because
/// no finite multipliers attain them.
pub fn check_moment_feasibility(moments: &[f64], support: Support) -> Result<(), MaxEntError> {
    if moments.is_empty() {
        return Err(MaxEntError::InvalidArgument("at least one moment is required".into()));
    }
    if let Some(v) = moments.iter().find(|v| !v.is_finite()) {
        return Err(MaxEntError::InvalidArgument(format!("non-finite moment {v}")));
    }
    let (lo, hi) = (support.lo as f64, support.hi as f64);
    let m1 = moments[0];
    if support.lo == support.hi {
        return Err(MaxEntError::Infeasible("single-point support admits only the degenerate law".into()));
    }
    if !(m1 > lo && m1 < hi) {
        return Err(MaxEntError::Infeasible(format!("mean {m1} is not inside ({lo}, {hi})")));
    }
    if moments.len() >= 2 {
        let var = moments[1] - m1 * m1;
        let f = m1 - m1.floor();
        let rel = 1e-12 * moments[1].abs().max(1.0);
        if var <= rel || (f * (1.0 - f) > 0.0 && var <= f * (1.0 - f) + rel) {
            return Err(MaxEntError::Infeasible(format!("variance {var} is too small for an integer-valued law")));
        }
        let band = -moments[1] + (lo + hi) * m1 - lo * hi;
        if band <= rel {
            return Err(MaxEntError::Infeasible(format!("variance {var} is too large for the support")));
        }
    }
    if moments.len() >= 4 {
        let var = moments[1] - m1 * m1;
        let z = standardize(&moments[..4], m1, var.sqrt());
        let with0: Vec<f64> = std::iter::once(1.0).chain(z.iter().copied()).collect();
        let h = DMatrix::from_fn(3, 3, |i, j| with0[i + j]);
        let min = h.symmetric_eigenvalues().min();
        if min <= -1e-10 {
            return Err(MaxEntError::Infeasible(format!("Hankel matrix is not positive semidefinite ({min:e})")));
        }
    }
    Ok(())
}

struct Dual<'a> {
    y: Vec<f64>,
    target: &'a [f64],
}

struct Eval {
    value: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
    p: Vec<f64>,
}

impl Dual<'_> {
    fn eval(&self, lambda: &[f64], hessian: bool) -> Eval {
        let k = lambda.len();
        let expo: Vec<f64> = self
            .y
            .iter()
            .map(|y| {
                let mut pw = 1.0;
                -lambda
                    .iter()
                    .map(|l| {
                        pw *= y;
                        l * pw
                    })
                    .sum::<f64>()
            })
            .collect();
        let mx = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = expo.iter().map(|e| (e - mx).exp()).collect();
        let z: f64 = w.iter().sum();
        let log_z = mx + z.ln();
        let p: Vec<f64> = w.iter().map(|v| v / z).collect();
        let mut mom = vec![0.0; 2 * k];
        for (y, pi) in self.y.iter().zip(&p) {
            let mut pw = 1.0;
            for m in mom.iter_mut() {
                pw *= y;
                *m += pi * pw;
            }
        }
        let value = log_z + lambda.iter().zip(self.target).map(|(l, m)| l * m).sum::<f64>();
        let grad = DVector::from_fn(k, |i, _| self.target[i] - mom[i]);
        let hess = if hessian {
            // Cov(y^{i+1}, y^{j+1}) = E[y^{i+j+2}] − E[y^{i+1}]E[y^{j+1}]
            DMatrix::from_fn(k, k, |i, j| mom[i + j + 1] - mom[i] * mom[j])
        } else {
            DMatrix::zeros(0, 0)
        };
        Eval { value, grad, hess, p }
    }
}

/// Fits the order-`K` Gibbs law (`K = moments.len()`) matching the raw
/// moments `E[X^k]` on `support`.
pub fn fit_maxent_distribution(
    moments: &[f64],
    support: Support,
    opts: &FitOptions,
) -> Result<MaxEntModel, MaxEntError> {
    check_moment_feasibility(moments, support)?;
    let order = moments.len();
    let shift = moments[0];
    let scale = if order >= 2 {
        (moments[1] - shift * shift).sqrt()
    } else {
        // a single moment gives no spread; use the support width
        ((support.hi - support.lo) as f64 / 4.0).max(1.0)
    };
    let target = standardize(moments, shift, scale);
    let dual = Dual { y: support.points().map(|x| (x as f64 - shift) / scale).collect(), target: &target };

    let mut lambda = vec![0.0; order];
    if order >= 2 {
        lambda[1] = 0.5;
    }
    let mut cur = dual.eval(&lambda, true);
    let mut history = vec![cur.value];
    let mut iterations = 0;
    let converged = |e: &Eval| {
        e.grad.iter().zip(&target).all(|(g, t)| g.abs() <= opts.tol * t.abs().max(1.0))
    };
    // intermediate iterates may pass through nearly degenerate laws (mass
    // piled on a few support points); their Hessians are regularized, and
    // the conditioning limit is applied where it matters: at the solution,
    // or when the iteration fails
    let condition_of = |h: &DMatrix<f64>| {
        let eig = h.symmetric_eigenvalues();
        if eig.min() > 0.0 { eig.max() / eig.min() } else { f64::INFINITY }
    };
    let failure = |cur: &Eval, iterations: usize| {
        let condition = condition_of(&cur.hess);
        if condition > opts.max_condition {
            MaxEntError::IllConditioned { condition, order }
        } else {
            MaxEntError::NoSolution { iterations, residual: cur.grad.amax() }
        }
    };
    while !converged(&cur) {
        if iterations >= opts.max_iterations {
            return Err(failure(&cur, iterations));
        }
        iterations += 1;
        // ∇D = m − E[y^k] and ∇²D = Cov(y^j, y^k); the Newton step is
        // λ ← λ − t H⁻¹∇D with a backtracking (Armijo) choice of t, where
        // eigenvalues of H below λ_max / max_condition are raised to that floor
        let eig = SymmetricEigen::new(cur.hess.clone());
        let floor = eig.eigenvalues.max().max(f64::MIN_POSITIVE) / opts.max_condition;
        let step = eig.eigenvectors.clone()
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.max(floor)))
            * eig.eigenvectors.transpose()
            * &cur.grad;
        let slope = -cur.grad.dot(&step);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = lambda.iter().zip(step.iter()).map(|(l, s)| l - t * s).collect();
            let e = dual.eval(&trial, false);
            // near the optimum the decrease drowns in round-off of ln ζ
            let noise = 4.0 * f64::EPSILON * cur.value.abs().max(1.0);
            if e.value.is_finite() && e.value <= cur.value + 1e-4 * t * slope + noise {
                accepted = Some(trial);
                break;
            }
            t *= 0.5;
        }
        let Some(next) = accepted else {
            if converged(&cur) {
                break;
            }
            return Err(failure(&cur, iterations));
        };
        lambda = next;
        cur = dual.eval(&lambda, true);
        history.push(cur.value);
        if lambda.iter().any(|l| !l.is_finite() || l.abs() > 1e12) {
            return Err(failure(&cur, iterations));
        }
    }
    let condition = condition_of(&cur.hess);
    if condition > opts.max_condition {
        return Err(MaxEntError::IllConditioned { condition, order });
    }

    // raw multipliers: Σ_k λ'_k s^{-k} (x − c)^k expanded in powers of x
    let mut raw = vec![0.0; order];
    for (k1, l) in lambda.iter().enumerate() {
        let k = k1 + 1;
        let f = l / scale.powi(k as i32);
        for (j, r) in raw.iter_mut().enumerate().take(k) {
            let j = j + 1;
            *r += f * binom(k, j) * (-shift).powi((k - j) as i32);
        }
    }
    let expo: Vec<f64> = support
        .points()
        .map(|x| {
            let x = x as f64;
            -raw.iter().enumerate().map(|(k, l)| l * x.powi(k as i32 + 1)).sum::<f64>()
        })
        .collect();
    let mx = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_partition = mx + expo.iter().map(|e| (e - mx).exp()).sum::<f64>().ln();
    let pmf = cur.p;
    let fitted = moments_from_pmf(&pmf, support.lo, order);
    Ok(MaxEntModel {
        order,
        support,
        lambda: raw,
        lambda_standardized: lambda,
        shift,
        scale,
        log_partition,
        pmf,
        target_moments: moments.to_vec(),
        fitted_moments: fitted,
        iterations,
        dual_history: history,
        condition,
    })
}
