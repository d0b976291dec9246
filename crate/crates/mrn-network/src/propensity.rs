//! Propensity families.
//!
//! Each family is evaluated generically over [`Scalar`] so the same code yields
//! values on real-valued states (Langevin, moment and macroscopic equations)
//! and exact derivatives through [`crate::jet::Jet`]. Integer states go through
//! [`Propensity::eval_count`], which applies the combinatorial mass-action law
//! with its Iverson guard.

use crate::jet::Scalar;
use statrs::function::gamma::ln_gamma;

/// Role of a neuron-population reaction in the tanh network model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeuralRole {
    /// `(capacity − y_t)·[φ>0]·tanh φ` with `φ = Σ w_n y_n + h`.
    Activation,
    /// `γ·y_t`.
    Decay,
}

/// Outer function applied to the affine part of a tabulated term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermFn {
    One,
    Exp,
    Tanh,
    /// `[u>0]·tanh u`
    TanhPositive,
}

impl TermFn {
    pub fn name(self) -> &'static str {
        match self {
            TermFn::One => "none",
            TermFn::Exp => "exp",
            TermFn::Tanh => "tanh",
            TermFn::TanhPositive => "tanh_pos",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "none" => TermFn::One,
            "exp" => TermFn::Exp,
            "tanh" => TermFn::Tanh,
            "tanh_pos" => TermFn::TanhPositive,
            _ => return None,
        })
    }
}

/// `coef · ∏_n x_n^{powers_n} · func(offset + Σ_n weights_n x_n)`
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub powers: Vec<u32>,
    pub func: TermFn,
    pub offset: f64,
    pub weights: Vec<f64>,
}

/// Whether Jensen's inequality may be invoked for a propensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Propensity {
    /// `κ ∏_n C(x_n, ν_n)`
    MassAction { k: f64 },
    /// `κ θ x_s x_c / (1 + θ x_s)`
    Hyperbolic { k: f64, theta: f64, substrate: usize, cofactor: usize },
    /// `V x_s / (K + x_s)`
    MichaelisMenten { vmax: f64, km: f64, substrate: usize },
    /// Opinion-formation rates on signed states:
    /// up: `κ (L − x_t) exp(+a·x)`, down: `κ (L + x_t) exp(−a·x)`.
    OpinionExp { k: f64, l: f64, target: usize, up: bool, a: Vec<f64> },
    NeuralTanh {
        role: NeuralRole,
        target: usize,
        capacity: f64,
        weights: Vec<f64>,
        h: f64,
        gamma: f64,
    },
    Tabulated { terms: Vec<Term> },
}

fn pos_tanh<S: Scalar>(u: &S) -> S {
    if u.value() > 0.0 {
        u.tanh()
    } else {
        u.zero_like()
    }
}

fn dot<S: Scalar>(x: &[S], w: &[f64], offset: f64) -> S {
    let mut acc = x[0].zero_like().shift(offset);
    for (xi, wi) in x.iter().zip(w) {
        if *wi != 0.0 {
            acc = acc.add(&xi.scale(*wi));
        }
    }
    acc
}

/// Exact binomial coefficient in 64-bit arithmetic, `None` on overflow.
pub fn binomial_u64(x: u64, k: u32) -> Option<u64> {
    if (k as u64) > x {
        return Some(0);
    }
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        // C(x,i)·(x−i) = C(x,i+1)·(i+1), so the division is exact.
        c = c.checked_mul(x - i)? / (i + 1);
    }
    Some(c)
}

/// `C(x, k)` as a float: exact integer path, log-gamma beyond 64 bits.
pub fn binomial_f64(x: i64, k: u32) -> f64 {
    if x < k as i64 {
        return 0.0;
    }
    match binomial_u64(x as u64, k) {
        Some(c) => c as f64,
        // A running product keeps ~k ulps of accuracy; log-gamma cancels badly
        // when x is large, so it is reserved for very high orders.
        None if k <= 1000 => (0..k as i64).fold(1.0, |c, i| c * (x - i) as f64 / (i + 1) as f64),
        None => {
            let (x, k) = (x as f64, k as f64);
            (ln_gamma(x + 1.0) - ln_gamma(k + 1.0) - ln_gamma(x - k + 1.0)).exp()
        }
    }
}

impl Propensity {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Propensity::MassAction { .. } => "mass_action",
            Propensity::Hyperbolic { .. } => "hyperbolic",
            Propensity::MichaelisMenten { .. } => "michaelis_menten",
            Propensity::OpinionExp { .. } => "opinion_exp",
            Propensity::NeuralTanh { .. } => "neural_tanh",
            Propensity::Tabulated { .. } => "tabulated",
        }
    }

    /// Smooth extension on real-valued states. Mass action uses the falling
    /// factorial polynomial `κ ∏ x(x−1)…(x−ν+1)/ν!` without the Iverson guard.
    pub fn eval<S: Scalar>(&self, x: &[S], reactants: &[u32]) -> S {
        match self {
            Propensity::MassAction { k } => {
                let mut acc = x[0].zero_like().shift(*k);
                for (n, &nu) in reactants.iter().enumerate() {
                    let mut fact = 1.0;
                    for j in 0..nu {
                        acc = acc.mul(&x[n].shift(-(j as f64)));
                        fact *= (j + 1) as f64;
                    }
                    if nu > 1 {
                        acc = acc.scale(1.0 / fact);
                    }
                }
                acc
            }
            Propensity::Hyperbolic { k, theta, substrate, cofactor } => {
                let xs = &x[*substrate];
                let num = xs.mul(&x[*cofactor]).scale(k * theta);
                num.mul(&xs.scale(*theta).shift(1.0).recip())
            }
            Propensity::MichaelisMenten { vmax, km, substrate } => {
                let xs = &x[*substrate];
                xs.scale(*vmax).mul(&xs.shift(*km).recip())
            }
            Propensity::OpinionExp { k, l, target, up, a } => {
                let sign = if *up { 1.0 } else { -1.0 };
                let lin = x[*target].scale(-sign).shift(*l).scale(*k);
                lin.mul(&dot(x, a, 0.0).scale(sign).exp())
            }
            Propensity::NeuralTanh { role, target, capacity, weights, h, gamma } => match role {
                NeuralRole::Activation => {
                    let free = x[*target].scale(-1.0).shift(*capacity);
                    free.mul(&pos_tanh(&dot(x, weights, *h)))
                }
                NeuralRole::Decay => x[*target].scale(*gamma),
            },
            Propensity::Tabulated { terms } => {
                let mut acc = x[0].zero_like();
                for term in terms {
                    let mut t = x[0].zero_like().shift(term.coef);
                    for (n, &p) in term.powers.iter().enumerate() {
                        for _ in 0..p {
                            t = t.mul(&x[n]);
                        }
                    }
                    let u = dot(x, &term.weights, term.offset);
                    t = match term.func {
                        TermFn::One => t,
                        TermFn::Exp => t.mul(&u.exp()),
                        TermFn::Tanh => t.mul(&u.tanh()),
                        TermFn::TanhPositive => t.mul(&pos_tanh(&u)),
                    };
                    acc = acc.add(&t);
                }
                acc
            }
        }
    }

    /// Propensity at an integer population state.
    pub fn eval_count(&self, x: &[i64], reactants: &[u32]) -> f64 {
        match self {
            Propensity::MassAction { k } => {
                let mut acc = *k;
                for (n, &nu) in reactants.iter().enumerate() {
                    match nu {
                        0 => {}
                        1 => acc *= x[n].max(0) as f64,
                        _ => acc *= binomial_f64(x[n], nu),
                    }
                }
                acc
            }
            _ => {
                let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
                self.eval(&xf, reactants).max(0.0)
            }
        }
    }

    /// Species the propensity reads.
    pub fn referenced_species(&self, reactants: &[u32]) -> Vec<usize> {
        let nz = |w: &[f64]| -> Vec<usize> {
            w.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i).collect()
        };
        let mut out: Vec<usize> = match self {
            Propensity::MassAction { .. } => reactants
                .iter()
                .enumerate()
                .filter(|(_, nu)| **nu > 0)
                .map(|(n, _)| n)
                .collect(),
            Propensity::Hyperbolic { substrate, cofactor, .. } => vec![*substrate, *cofactor],
            Propensity::MichaelisMenten { substrate, .. } => vec![*substrate],
            Propensity::OpinionExp { target, a, .. } => {
                let mut v = nz(a);
                v.push(*target);
                v
            }
            Propensity::NeuralTanh { role, target, weights, .. } => {
                let mut v = vec![*target];
                if *role == NeuralRole::Activation {
                    v.extend(nz(weights));
                }
                v
            }
            Propensity::Tabulated { terms } => {
                let mut v = Vec::new();
                for t in terms {
                    v.extend(t.powers.iter().enumerate().filter(|(_, p)| **p > 0).map(|(n, _)| n));
                    if t.func != TermFn::One {
                        v.extend(nz(&t.weights));
                    }
                }
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Parameter and index checks; returns human-readable problems.
    pub fn check(&self, n_species: usize) -> Vec<String> {
        let mut p = Vec::new();
        let mut nonneg = |name: &str, v: f64| {
            if !(v.is_finite() && v >= 0.0) {
                p.push(format!("{name} must be a finite nonnegative number (got {v})"));
            }
        };
        let mut idx = Vec::new();
        match self {
            Propensity::MassAction { k } => nonneg("k", *k),
            Propensity::Hyperbolic { k, theta, substrate, cofactor } => {
                nonneg("k", *k);
                if !(theta.is_finite() && *theta > 0.0) {
                    p.push(format!("theta must be positive (got {theta})"));
                }
                idx.extend([*substrate, *cofactor]);
            }
            Propensity::MichaelisMenten { vmax, km, substrate } => {
                nonneg("vmax", *vmax);
                nonneg("km", *km);
                idx.push(*substrate);
            }
            Propensity::OpinionExp { k, l, target, a, .. } => {
                nonneg("k", *k);
                nonneg("L", *l);
                idx.push(*target);
                if a.len() != n_species {
                    p.push(format!("a has {} entries, expected {n_species}", a.len()));
                }
            }
            Propensity::NeuralTanh { target, capacity, weights, gamma, .. } => {
                nonneg("gamma", *gamma);
                nonneg("capacity", *capacity);
                idx.push(*target);
                if weights.len() != n_species {
                    p.push(format!("weights has {} entries, expected {n_species}", weights.len()));
                }
            }
            Propensity::Tabulated { terms } => {
                if terms.is_empty() {
                    p.push("tabulated expression has no terms".into());
                }
                for (i, t) in terms.iter().enumerate() {
                    if t.powers.len() != n_species || t.weights.len() != n_species {
                        p.push(format!("term {i}: powers/weights must have {n_species} entries"));
                    }
                    if !t.coef.is_finite() {
                        p.push(format!("term {i}: non-finite coefficient"));
                    }
                }
            }
        }
        for i in idx {
            if i >= n_species {
                p.push(format!("species index {i} out of range (N = {n_species})"));
            }
        }
        p
    }

    /// Convexity flag consumed by the Jensen-corrected moment equations.
    ///
    /// The opinion-formation rates are treated as convex, following the
    /// modelling practice for that example; mass action is convex when it is
    /// at most first order or a single-species second-order term.
    pub fn convexity(&self, reactants: &[u32]) -> Convexity {
        match self {
            Propensity::MassAction { .. } => {
                let order: u32 = reactants.iter().sum();
                let species = reactants.iter().filter(|v| **v > 0).count();
                if order <= 1 || (order == 2 && species == 1) {
                    Convexity::Convex
                } else {
                    Convexity::Unknown
                }
            }
            Propensity::OpinionExp { .. } => Convexity::Convex,
            _ => Convexity::Unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_exact_and_fallback_agree() {
        assert_eq!(binomial_u64(10, 3), Some(120));
        assert_eq!(binomial_u64(2, 3), Some(0));
        assert_eq!(binomial_u64(u64::MAX, 2), None);
        let big = binomial_f64(1_000_000_000_000, 3);
        let exact = 1e12 * (1e12 - 1.0) * (1e12 - 2.0) / 6.0;
        assert!((big / exact - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hyperbolic_and_mm_values() {
        let p = Propensity::Hyperbolic { k: 2.0, theta: 0.5, substrate: 0, cofactor: 1 };
        assert!((p.eval_count(&[2, 3], &[1, 1]) - 2.0 * 0.5 * 6.0 / 2.0).abs() < 1e-14);
        let mm = Propensity::MichaelisMenten { vmax: 3.0, km: 1.0, substrate: 0 };
        assert!((mm.eval_count(&[2], &[1]) - 2.0).abs() < 1e-14);
    }
}
