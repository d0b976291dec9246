//! Spectral solution `p(t) = Σ_k c_k r_k e^{λ_k t}` of the master equation.
//!
//! Eigenvectors come from the complex Schur form `P = U T U*`: the real Schur
//! form is converted to complex triangular form with Givens rotations, the
//! eigenvectors of `T` follow by back-substitution, and the left eigenvectors
//! are the rows of `R⁻¹`, which makes `l_kᵀ r_k = 1`.

use nalgebra::{Complex, DMatrix, DVector, Schur};

use crate::generator::Generator;
use crate::StateSpaceError;

type C = Complex<f64>;

const MAX_DENSE: usize = 3000;
const MAX_COND: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub eigenvalues: Vec<C>,
    /// Condition number of the (column-normalized) eigenvector matrix.
    pub condition: f64,
    /// `p(t)` for every requested time.
    pub distributions: Vec<Vec<f64>>,
}

/// Converts a real quasi-triangular Schur pair to a complex triangular one.
fn rsf_to_csf(u: &DMatrix<f64>, t: &DMatrix<f64>) -> (DMatrix<C>, DMatrix<C>) {
    let n = t.nrows();
    let mut u: DMatrix<C> = u.map(|x| C::new(x, 0.0));
    let mut t: DMatrix<C> = t.map(|x| C::new(x, 0.0));
    for m in (1..n).rev() {
        if t[(m, m - 1)].norm() == 0.0 {
            continue;
        }
        let (a, b, c, d) = (t[(m - 1, m - 1)], t[(m - 1, m)], t[(m, m - 1)], t[(m, m)]);
        let half = (a - d) * 0.5;
        let disc = (half * half + b * c).sqrt();
        let lambda = (a + d) * 0.5 + disc;
        let mu = lambda - d;
        let r = (mu.norm_sqr() + c.norm_sqr()).sqrt();
        let (cs, sn) = (mu / r, c / r);
        // G = [conj(cs) sn; -sn cs]
        for j in (m - 1)..n {
            let (x, y) = (t[(m - 1, j)], t[(m, j)]);
            t[(m - 1, j)] = cs.conj() * x + sn * y;
            t[(m, j)] = -sn * x + cs * y;
        }
        // right-multiply by G* = [cs  -conj(sn); conj(sn)  conj(cs)]
        let apply = |mat: &mut DMatrix<C>, rows: usize| {
            for i in 0..rows {
                let (x, y) = (mat[(i, m - 1)], mat[(i, m)]);
                mat[(i, m - 1)] = x * cs + y * sn.conj();
                mat[(i, m)] = -x * sn.conj() + y * cs.conj();
            }
        };
        apply(&mut t, m + 1);
        apply(&mut u, n);
        t[(m, m - 1)] = C::new(0.0, 0.0);
    }
    (u, t)
}

/// Evaluates the spectral solution at `times` starting from `p0`.
pub fn eigen_solution(gen: &Generator, p0: &[f64], times: &[f64]) -> Result<EigenSolution, StateSpaceError> {
    let n = gen.dim();
    if n > MAX_DENSE {
        return Err(StateSpaceError::TooLarge { dim: n, limit: MAX_DENSE });
    }
    if p0.len() != n {
        return Err(StateSpaceError::InvalidArgument("vector length does not match the generator".into()));
    }
    let dense = gen.to_dense();
    let schur = Schur::try_new(dense.clone(), f64::EPSILON, 10_000)
        .ok_or(StateSpaceError::StepControl("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let (u, t) = rsf_to_csf(&q, &t);

    let tnorm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut y = DMatrix::<C>::zeros(n, n);
    for k in 0..n {
        let lk = t[(k, k)];
        y[(k, k)] = C::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = C::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lk;
            if den.norm() < smin {
                den = C::new(smin, 0.0);
            }
            y[(i, k)] = -s / den;
        }
    }
    let mut r = &u * &y;
    for k in 0..n {
        let nrm = r.column(k).norm();
        if nrm > 0.0 {
            r.column_mut(k).unscale_mut(nrm);
        }
    }
    let sv = r.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin_sv = sv.min();
    let condition = if smin_sv > 0.0 { smax / smin_sv } else { f64::INFINITY };
    if !(condition <= MAX_COND) {
        return Err(StateSpaceError::Defective { cond: condition });
    }
    let lu = r.clone().lu();
    let p0c = DVector::<C>::from_iterator(n, p0.iter().map(|x| C::new(*x, 0.0)));
    let c = lu.solve(&p0c).ok_or(StateSpaceError::Defective { cond: f64::INFINITY })?;
    let eigenvalues: Vec<C> = (0..n).map(|k| t[(k, k)]).collect();

    let mut distributions = Vec::with_capacity(times.len());
    for &time in times {
        let coeff = DVector::<C>::from_iterator(n, (0..n).map(|k| c[k] * (eigenvalues[k] * time).exp()));
        let p = &r * coeff;
        distributions.push(p.iter().map(|z| z.re).collect());
    }
    Ok(EigenSolution { eigenvalues, condition, distributions })
}
