//! Forward-mode jets for exact chain-rule derivatives of field evaluators.
//!
//! `Jet<f64, 3>` carries a gradient; `Jet<Jet<f64, 3>, 3>` carries the Hessian.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Innermost real value.
    fn re(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    /// `x^q` for x > 0.
    fn powf(self, q: f64) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }
    /// `|x|^q`, using the sign of the innermost value.
    fn abs_pow(self, q: f64) -> Self {
        if self.re() < 0.0 {
            (-self).powf(q)
        } else {
            self.powf(q)
        }
    }
    /// `x|x|^q`.
    fn signed_pow(self, q: f64) -> Self {
        self * self.abs_pow(q)
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, q: f64) -> Self {
        f64::powf(self, q)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub v: T,
    pub d: [T; N],
}

impl<T: Scalar, const N: usize> Jet<T, N> {
    pub fn constant(v: T) -> Self {
        Jet { v, d: [T::cst(0.0); N] }
    }

    /// The `i`-th independent variable at value `v`.
    pub fn var(v: T, i: usize) -> Self {
        let mut d = [T::cst(0.0); N];
        d[i] = T::cst(1.0);
        Jet { v, d }
    }

    fn chain(self, f: T, df: T) -> Self {
        let mut d = self.d;
        for x in d.iter_mut() {
            *x = *x * df;
        }
        Jet { v: f, d }
    }
}

impl<T: Scalar, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self.v = self.v + o.v;
        for i in 0..N {
            self.d[i] = self.d[i] + o.d[i];
        }
        self
    }
}

impl<T: Scalar, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self.v = self.v - o.v;
        for i in 0..N {
            self.d[i] = self.d[i] - o.d[i];
        }
        self
    }
}

impl<T: Scalar, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut d = self.d;
        for i in 0..N {
            d[i] = self.d[i] * o.v + self.v * o.d[i];
        }
        Jet { v: self.v * o.v, d }
    }
}

impl<T: Scalar, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = T::cst(1.0) / o.v;
        let v = self.v * inv;
        let mut d = self.d;
        for i in 0..N {
            d[i] = (self.d[i] - v * o.d[i]) * inv;
        }
        Jet { v, d }
    }
}

impl<T: Scalar, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.v = -self.v;
        for x in self.d.iter_mut() {
            *x = -*x;
        }
        self
    }
}

impl<T: Scalar, const N: usize> Scalar for Jet<T, N> {
    fn cst(v: f64) -> Self {
        Jet::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.v.re()
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, T::cst(0.5) / s)
    }
    fn powf(self, q: f64) -> Self {
        let p = self.v.powf(q);
        self.chain(p, self.v.powf(q - 1.0).scale(q))
    }
    fn atan2(self, x: Self) -> Self {
        let r2 = self.v * self.v + x.v * x.v;
        let v = self.v.atan2(x.v);
        let mut d = self.d;
        for i in 0..N {
            d[i] = (x.v * self.d[i] - self.v * x.d[i]) / r2;
        }
        Jet { v, d }
    }
}

pub type Grad = Jet<f64, 3>;
pub type Hess = Jet<Jet<f64, 3>, 3>;

/// Seed a point as gradient jets.
pub fn grad_point(x: [f64; 3]) -> [Grad; 3] {
    [Grad::var(x[0], 0), Grad::var(x[1], 1), Grad::var(x[2], 2)]
}

/// Seed a point as second-order jets.
pub fn hess_point(x: [f64; 3]) -> [Hess; 3] {
    let g = grad_point(x);
    [Hess::var(g[0], 0), Hess::var(g[1], 1), Hess::var(g[2], 2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_composite() {
        let [x, y, _] = grad_point([0.7, -1.3, 0.0]);
        let f = (x * y).sin() + x.powf(2.5) / y.atan2(x);
        let (xv, yv) = (0.7f64, -1.3f64);
        let g = |x: f64, y: f64| (x * y).sin() + x.powf(2.5) / y.atan2(x);
        let h = 1e-6;
        let fx = (g(xv + h, yv) - g(xv - h, yv)) / (2.0 * h);
        let fy = (g(xv, yv + h) - g(xv, yv - h)) / (2.0 * h);
        assert!((f.d[0] - fx).abs() < 1e-8);
        assert!((f.d[1] - fy).abs() < 1e-8);
    }

    #[test]
    fn hessian_entries() {
        let [x, y, z] = hess_point([1.1, 0.4, 2.0]);
        let f = x * x * y + z.sqrt() * x;
        // ∂²f/∂x∂y = 2x, ∂²f/∂x∂z = 1/(2√z)
        assert!((f.d[0].d[1] - 2.2).abs() < 1e-14);
        assert!((f.d[0].d[2] - 0.5 / 2f64.sqrt()).abs() < 1e-14);
        assert!((f.d[2].d[0] - 0.5 / 2f64.sqrt()).abs() < 1e-14);
    }
}
