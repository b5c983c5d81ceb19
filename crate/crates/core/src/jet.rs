//! Truncated bivariate Taylor jets in `(x, t)`.
//!
//! A [`Jet`] stores the scaled partial derivatives `∂x^i ∂t^j f / (i! j!)` of a
//! function at one point for every `i + j <= order`. Arithmetic on jets is
//! exact truncated power-series arithmetic, so composite fields (products,
//! quotients, logarithms of analytic fields) carry exact derivatives without
//! any numerical differentiation.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Highest total derivative order a jet can carry.
pub const MAX_ORDER: usize = 4;

const LEN: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[inline]
const fn idx(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

const FACT: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: [f64; LEN],
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [0.0; LEN];
        c[0] = value;
        Jet { order, c }
    }

    /// The coordinate function `x` expanded at `x`.
    pub fn var_x(x: f64, order: usize) -> Self {
        let mut j = Jet::constant(x, order);
        if order >= 1 {
            j.c[idx(1, 0)] = 1.0;
        }
        j
    }

    /// The coordinate function `t` expanded at `t`.
    pub fn var_t(t: f64, order: usize) -> Self {
        let mut j = Jet::constant(t, order);
        if order >= 1 {
            j.c[idx(0, 1)] = 1.0;
        }
        j
    }

    /// Builds a jet from raw partial derivatives `d(i, j) = ∂x^i ∂t^j f`.
    pub fn from_derivatives(order: usize, mut d: impl FnMut(usize, usize) -> f64) -> Self {
        let mut jet = Jet::constant(0.0, order);
        for n in 0..=order {
            for j in 0..=n {
                let i = n - j;
                jet.c[idx(i, j)] = d(i, j) / (FACT[i] * FACT[j]);
            }
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Raw partial derivative `∂x^i ∂t^j`; zero beyond the jet's order.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            return 0.0;
        }
        self.c[idx(i, j)] * FACT[i] * FACT[j]
    }

    pub fn dx(&self) -> f64 {
        self.derivative(1, 0)
    }

    pub fn dxx(&self) -> f64 {
        self.derivative(2, 0)
    }

    pub fn dt(&self) -> f64 {
        self.derivative(0, 1)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = Jet::constant(0.0, order);
        let n = idx(0, order) + 1;
        out.c[..n].copy_from_slice(&self.c[..n]);
        out
    }

    /// Jet of `∂f/∂x`, one order lower.
    pub fn d_x(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Jet::constant(0.0, order);
        for n in 0..=order {
            for j in 0..=n {
                let i = n - j;
                out.c[idx(i, j)] = (i + 1) as f64 * self.c[idx(i + 1, j)];
            }
        }
        out
    }

    /// Jet of `∂f/∂t`, one order lower.
    pub fn d_t(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Jet::constant(0.0, order);
        for n in 0..=order {
            for j in 0..=n {
                let i = n - j;
                out.c[idx(i, j)] = (j + 1) as f64 * self.c[idx(i, j + 1)];
            }
        }
        out
    }

    /// Composes a univariate function with this jet, given the Taylor
    /// coefficients `g^(n)(u0) / n!` for `n = 0..=order`.
    fn compose(&self, taylor: &[f64; MAX_ORDER + 1]) -> Self {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut out = Jet::constant(taylor[0], self.order);
        let mut power = Jet::constant(1.0, self.order);
        for coeff in taylor.iter().take(self.order + 1).skip(1) {
            power = power * delta;
            out += power * *coeff;
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.c[0].exp();
        let mut taylor = [0.0; MAX_ORDER + 1];
        for (n, slot) in taylor.iter_mut().enumerate() {
            *slot = e / FACT[n];
        }
        self.compose(&taylor)
    }

    /// Natural logarithm. The caller guarantees a positive value.
    pub fn ln(&self) -> Self {
        let u = self.c[0];
        let mut taylor = [0.0; MAX_ORDER + 1];
        taylor[0] = u.ln();
        let mut inv = 1.0;
        for (n, slot) in taylor.iter_mut().enumerate().skip(1) {
            inv /= u;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * inv / n as f64;
        }
        self.compose(&taylor)
    }

    pub fn recip(&self) -> Self {
        let u = self.c[0];
        let mut taylor = [0.0; MAX_ORDER + 1];
        let mut inv = 1.0 / u;
        for (n, slot) in taylor.iter_mut().enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *slot = sign * inv;
            inv /= u;
        }
        self.compose(&taylor)
    }

    pub fn powf(&self, p: f64) -> Self {
        let u = self.c[0];
        let mut taylor = [0.0; MAX_ORDER + 1];
        let mut binom = 1.0;
        for (n, slot) in taylor.iter_mut().enumerate() {
            *slot = binom * u.powf(p - n as f64);
            binom *= (p - n as f64) / (n + 1) as f64;
        }
        self.compose(&taylor)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.c[..=idx(0, self.order)].iter().all(|v| v.is_finite())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut out = self.truncate(rhs.order);
        for k in 0..=idx(0, out.order) {
            out.c[k] += rhs.c[k];
        }
        out
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in self.c.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for n1 in 0..=order {
            for j1 in 0..=n1 {
                let a = self.c[idx(n1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for n2 in 0..=(order - n1) {
                    for j2 in 0..=n2 {
                        let i = n1 - j1 + n2 - j2;
                        out.c[idx(i, j1 + j2)] += a * rhs.c[idx(n2 - j2, j2)];
                    }
                }
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for v in self.c.iter_mut() {
            *v *= rhs;
        }
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}
