//! Stationary distributions by Grassmann–Taksar–Heyman (GTH) elimination.
//!
//! GTH is Gaussian elimination on the rate matrix rearranged so that no
//! subtraction ever occurs; it is accurate to working precision even when
//! probabilities span hundreds of orders of magnitude. Lexicographic state
//! ordering gives the generator a narrow band, and elimination never fills
//! outside that band, so the cost is `O(K·b²)` for bandwidth `b`.

use crate::generator::Generator;
use crate::StateSpaceError;

/// Upper limit on the number of stored band entries.
const MAX_BAND_ENTRIES: usize = 60_000_000;

struct Band {
    bw: usize,
    width: usize,
    data: Vec<f64>,
}

impl Band {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.bw - i)
    }
    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }
}

/// Solves `P p̄ = 0`, `Σ p̄ = 1`. The returned vector is the unique
/// stationary law when the chain has a single closed class; a chain with
/// several closed classes is reported as [`StateSpaceError::Reducible`].
pub fn stationary_distribution(gen: &Generator) -> Result<Vec<f64>, StateSpaceError> {
    let k = gen.dim();
    if k == 0 {
        return Err(StateSpaceError::InvalidArgument("empty generator".into()));
    }
    if k == 1 {
        return Ok(vec![1.0]);
    }
    if gen.total_outflow_rate() > 0.0 {
        log::warn!("stationary distribution of a truncated generator: boundary outflow is ignored");
    }
    let bw = gen.bandwidth().max(1);
    let width = 2 * bw + 1;
    if k.saturating_mul(width) > MAX_BAND_ENTRIES {
        return Err(StateSpaceError::TooLarge { dim: k, limit: MAX_BAND_ENTRIES / width });
    }
    // q(a, b) = rate a → b = P[b, a]
    let mut q = Band { bw, width, data: vec![0.0; k * width] };
    for j in 0..k {
        for (i, v) in gen.column(j) {
            let id = q.idx(j, i);
            q.data[id] += v;
        }
    }

    for n in (1..k).rev() {
        let lo = n.saturating_sub(bw);
        let s: f64 = (lo..n).map(|j| q.get(n, j)).sum();
        if !(s > 0.0) {
            return Err(StateSpaceError::Reducible);
        }
        for i in lo..n {
            let id = q.idx(i, n);
            q.data[id] /= s;
        }
        for i in lo..n {
            let a = q.get(i, n);
            if a == 0.0 {
                continue;
            }
            for j in lo..n {
                if j != i {
                    let b = q.get(n, j);
                    if b != 0.0 {
                        let id = q.idx(i, j);
                        q.data[id] += a * b;
                    }
                }
            }
        }
    }

    let mut pi = vec![0.0; k];
    pi[0] = 1.0;
    for n in 1..k {
        let lo = n.saturating_sub(bw);
        pi[n] = (lo..n).map(|i| pi[i] * q.get(i, n)).sum();
    }
    let total: f64 = pi.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(StateSpaceError::NonFinite("stationary distribution"));
    }
    pi.iter_mut().for_each(|v| *v /= total);
    Ok(pi)
}

/// Kullback–Leibler distance `D[p ‖ p̄] = Σ p ln(p / p̄)` with `0 ln 0 = 0`;
/// infinite when `p` charges a state where `p̄` vanishes.
pub fn kl_divergence(p: &[f64], p_bar: &[f64]) -> f64 {
    p.iter()
        .zip(p_bar)
        .map(|(&a, &b)| {
            if a <= 0.0 {
                0.0
            } else if b <= 0.0 {
                f64::INFINITY
            } else {
                a * (a / b).ln()
            }
        })
        .sum()
}
