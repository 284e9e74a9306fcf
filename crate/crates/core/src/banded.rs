//! Gaussian elimination with partial pivoting restricted to a band.
//!
//! The multi-domain collocation Jacobians are block-banded; dense storage is
//! kept for simplicity while the elimination only touches the band.

use crate::error::{Error, Result};

pub struct BandedSystem {
    n: usize,
    a: Vec<f64>,
}

impl BandedSystem {
    pub fn zeros(n: usize) -> Self {
        BandedSystem { n, a: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn bandwidths(&self) -> (usize, usize) {
        let n = self.n;
        let (mut kl, mut ku) = (0, 0);
        for i in 0..n {
            let row = &self.a[i * n..(i + 1) * n];
            if let Some(first) = row.iter().position(|&v| v != 0.0) {
                kl = kl.max(i.saturating_sub(first));
            }
            if let Some(last) = row.iter().rposition(|&v| v != 0.0) {
                ku = ku.max(last.saturating_sub(i));
            }
        }
        (kl, ku)
    }

    /// Solves `A x = b` in place of `b`; the matrix is destroyed.
    pub fn solve(mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        let (kl, ku) = self.bandwidths();
        let width = kl + ku;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.a[k * n + k].abs();
            for i in k + 1..=last_row {
                let v = self.a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::NoConvergence { msg: "singular banded Jacobian".into(), best_residual: f64::NAN });
            }
            let last_col = (k + width).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    self.a.swap(k * n + j, p * n + j);
                }
                b.swap(k, p);
            }
            let piv = self.a[k * n + k];
            for i in k + 1..=last_row {
                let f = self.a[i * n + k] / piv;
                if f == 0.0 {
                    continue;
                }
                self.a[i * n + k] = 0.0;
                for j in k + 1..=last_col {
                    self.a[i * n + j] -= f * self.a[k * n + j];
                }
                b[i] -= f * b[k];
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + width).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last_col {
                s -= self.a[k * n + j] * b[j];
            }
            b[k] = s / self.a[k * n + k];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_pivoting_band() {
        let n = 40;
        let mut m = BandedSystem::zeros(n);
        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                let v = if i == j { 1e-3 } else { ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.5 };
                m.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut x = rhs.clone();
        m.solve(&mut x).unwrap();
        let r = &dense * nalgebra::DVector::from_vec(x) - nalgebra::DVector::from_vec(rhs);
        assert!(r.amax() < 1e-10);
    }
}
