//! Chebyshev–Gauss–Lobatto grids, differentiation matrices and interpolants.

use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Ascending CGL nodes `x_j = -cos(πj/n)`, j = 0..=n.
pub fn cgl_nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|j| -(PI * j as f64 / n as f64).cos()).collect()
}

/// `1 - x_j²` at the CGL nodes, computed as `sin²` to keep relative accuracy near ±1.
pub fn cgl_one_minus_x2(n: usize) -> Vec<f64> {
    (0..=n).map(|j| (PI * j as f64 / n as f64).sin().powi(2)).collect()
}

/// Differentiation matrix on the ascending CGL grid of [-1, 1].
pub fn diff_matrix(n: usize) -> DMatrix<f64> {
    let x = cgl_nodes(n);
    let c = |j: usize| {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            2.0 * s
        } else {
            s
        }
    };
    let mut d = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    d
}

/// Clenshaw–Curtis weights on the CGL grid.
pub fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let th: Vec<f64> = (0..=n).map(|j| PI * j as f64 / n as f64).collect();
    let interior = |j: usize| -> f64 {
        let mut v = 1.0;
        let half = n / 2;
        for k in 1..=half {
            let b = if 2 * k == n { 1.0 } else { 2.0 };
            v -= b * (2.0 * k as f64 * th[j]).cos() / (4.0 * (k * k) as f64 - 1.0);
        }
        v
    };
    if n % 2 == 0 {
        w[0] = 1.0 / ((n * n) as f64 - 1.0);
    } else {
        w[0] = 1.0 / (n * n) as f64;
    }
    w[n] = w[0];
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(1) {
        *wj = 2.0 * interior(j) / n as f64;
    }
    w
}

/// Chebyshev series on an interval [a, b].
#[derive(Debug, Clone, PartialEq)]
pub struct Cheb {
    pub a: f64,
    pub b: f64,
    pub coef: Vec<f64>,
}

impl Cheb {
    /// Interpolant through values at the ascending CGL nodes mapped to [a, b].
    pub fn from_cgl_values(a: f64, b: f64, vals: &[f64]) -> Cheb {
        let n = vals.len() - 1;
        assert!(n >= 1);
        // values are ascending in x, i.e. x_j = -cos(πj/n); reorder to cos(πj/n)
        let f: Vec<f64> = vals.iter().rev().copied().collect();
        let mut coef = vec![0.0; n + 1];
        for (k, ck) in coef.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, fj) in f.iter().enumerate() {
                let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
                s += wj * fj * (PI * (j * k) as f64 / n as f64).cos();
            }
            let ck_scale = if k == 0 || k == n { 1.0 } else { 2.0 };
            *ck = ck_scale * s / n as f64;
        }
        Cheb { a, b, coef }
    }

    fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coef, self.to_unit(x))
    }

    /// Derivative series.
    pub fn derivative(&self) -> Cheb {
        let n = self.coef.len();
        let scale = 2.0 / (self.b - self.a);
        if n <= 1 {
            return Cheb { a: self.a, b: self.b, coef: vec![0.0] };
        }
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.coef[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        for v in d.iter_mut() {
            *v *= scale;
        }
        Cheb { a: self.a, b: self.b, coef: d }
    }
}

/// Σ c_k T_k(x).
pub fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c.first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_polynomials_exactly() {
        let n = 12;
        let x = cgl_nodes(n);
        let d = diff_matrix(n);
        let f: Vec<f64> = x.iter().map(|x| x.powi(5) - 2.0 * x).collect();
        for i in 0..=n {
            let df: f64 = (0..=n).map(|j| d[(i, j)] * f[j]).sum();
            assert!((df - (5.0 * x[i].powi(4) - 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolant_and_derivative() {
        let n = 30;
        let x: Vec<f64> = cgl_nodes(n).iter().map(|x| 1.0 + 0.5 * (x + 1.0)).collect();
        let v: Vec<f64> = x.iter().map(|x| (2.0 * x).sin()).collect();
        let c = Cheb::from_cgl_values(1.0, 2.0, &v);
        assert!((c.eval(1.37) - (2.74f64).sin()).abs() < 1e-14);
        assert!((c.derivative().eval(1.37) - 2.0 * (2.74f64).cos()).abs() < 1e-12);
        assert!((c.derivative().derivative().eval(1.9) + 4.0 * (3.8f64).sin()).abs() < 1e-10);
    }

    #[test]
    fn cc_weights_integrate() {
        for n in [8, 9, 32] {
            let x = cgl_nodes(n);
            let w = clenshaw_curtis_weights(n);
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert!((s - 2.0 / 3.0).abs() < 1e-14, "{n}");
        }
    }
}
