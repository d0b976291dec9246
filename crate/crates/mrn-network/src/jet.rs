//! Truncated multivariate Taylor jets (value, gradient, Hessian, third
//! derivative tensor) used to differentiate propensities exactly.
//!
//! Every propensity family is written once, generically over [`Scalar`], and
//! evaluated either on plain `f64` or on a [`Jet`] seeded with the variables
//! of interest (population counts or degrees of advancement).

use std::ops::{Add, Mul, Sub};

/// Arithmetic needed to evaluate a propensity expression.
pub trait Scalar: Clone {
    /// A constant with the same shape as `like`.
    fn constant(v: f64, like: &Self) -> Self;
    fn value(&self) -> f64;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, k: f64) -> Self;
    fn shift(&self, c: f64) -> Self;
    /// Apply a scalar function given its value and first three derivatives
    /// at `self.value()`.
    fn compose(&self, d: [f64; 4]) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }
    fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }
    fn tanh(&self) -> Self {
        let t = self.value().tanh();
        let s = 1.0 - t * t;
        self.compose([t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)])
    }
    fn recip(&self) -> Self {
        let u = self.value();
        self.compose([1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u), -6.0 / (u * u * u * u)])
    }
    /// Zero with the same shape.
    fn zero_like(&self) -> Self {
        Self::constant(0.0, self)
    }
}

impl Scalar for f64 {
    fn constant(v: f64, _: &Self) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn shift(&self, c: f64) -> Self {
        self + c
    }
    fn compose(&self, d: [f64; 4]) -> Self {
        d[0]
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
}

/// Value plus derivatives up to `order` (1..=3) with respect to `n` variables.
/// Tensors are stored dense and fully symmetric (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub n: usize,
    pub order: u8,
    pub v: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub t: Vec<f64>,
}

impl Jet {
    pub fn constant_with(n: usize, order: u8, v: f64) -> Self {
        assert!((1..=3).contains(&order), "jet order must be 1..=3");
        Jet {
            n,
            order,
            v,
            g: vec![0.0; n],
            h: if order >= 2 { vec![0.0; n * n] } else { Vec::new() },
            t: if order >= 3 { vec![0.0; n * n * n] } else { Vec::new() },
        }
    }

    /// The independent variable `i` evaluated at `v`.
    pub fn variable(n: usize, order: u8, i: usize, v: f64) -> Self {
        let mut j = Self::constant_with(n, order, v);
        j.g[i] = 1.0;
        j
    }

    /// An affine form `c + Σ_i w_i u_i` in the jet variables.
    pub fn affine(order: u8, c: f64, w: &[f64], at: &[f64]) -> Self {
        let n = w.len();
        let mut j = Self::constant_with(n, order, c);
        for i in 0..n {
            j.v += w[i] * at[i];
            j.g[i] = w[i];
        }
        j
    }

    #[inline]
    pub fn hess(&self, i: usize, k: usize) -> f64 {
        self.h[i * self.n + k]
    }

    #[inline]
    pub fn third(&self, i: usize, k: usize, l: usize) -> f64 {
        self.t[(i * self.n + k) * self.n + l]
    }
}

impl Scalar for Jet {
    fn constant(v: f64, like: &Self) -> Self {
        Jet::constant_with(like.n, like.order, v)
    }

    fn value(&self) -> f64 {
        self.v
    }

    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Jet {
            n: self.n,
            order: self.order,
            v: self.v + o.v,
            g: zip(&self.g, &o.g),
            h: zip(&self.h, &o.h),
            t: zip(&self.t, &o.t),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let (f, g) = (self, o);
        let mut r = Jet::constant_with(n, self.order, f.v * g.v);
        for i in 0..n {
            r.g[i] = f.g[i] * g.v + f.v * g.g[i];
        }
        if self.order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let ij = i * n + j;
                    r.h[ij] = f.h[ij] * g.v + f.g[i] * g.g[j] + f.g[j] * g.g[i] + f.v * g.h[ij];
                }
            }
        }
        if self.order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ijk = (i * n + j) * n + k;
                        r.t[ijk] = f.t[ijk] * g.v
                            + f.h[i * n + j] * g.g[k]
                            + f.h[i * n + k] * g.g[j]
                            + f.h[j * n + k] * g.g[i]
                            + f.g[i] * g.h[j * n + k]
                            + f.g[j] * g.h[i * n + k]
                            + f.g[k] * g.h[i * n + j]
                            + f.v * g.t[ijk];
                    }
                }
            }
        }
        r
    }

    fn scale(&self, k: f64) -> Self {
        Jet {
            n: self.n,
            order: self.order,
            v: self.v * k,
            g: self.g.iter().map(|x| x * k).collect(),
            h: self.h.iter().map(|x| x * k).collect(),
            t: self.t.iter().map(|x| x * k).collect(),
        }
    }

    fn shift(&self, c: f64) -> Self {
        let mut r = self.clone();
        r.v += c;
        r
    }

    fn compose(&self, d: [f64; 4]) -> Self {
        let n = self.n;
        let u = self;
        let mut r = Jet::constant_with(n, self.order, d[0]);
        for i in 0..n {
            r.g[i] = d[1] * u.g[i];
        }
        if self.order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    r.h[i * n + j] = d[2] * u.g[i] * u.g[j] + d[1] * u.h[i * n + j];
                }
            }
        }
        if self.order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ijk = (i * n + j) * n + k;
                        r.t[ijk] = d[3] * u.g[i] * u.g[j] * u.g[k]
                            + d[2]
                                * (u.h[i * n + j] * u.g[k]
                                    + u.h[i * n + k] * u.g[j]
                                    + u.h[j * n + k] * u.g[i])
                            + d[1] * u.t[ijk];
                    }
                }
            }
        }
        r
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Scalar::add(self, o)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Scalar::sub(self, o)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        Scalar::mul(self, o)
    }
}
