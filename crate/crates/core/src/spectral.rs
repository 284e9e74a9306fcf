//! Eigenanalysis of `-L_β = -∂_t² - β(β+1)/(1-t²)` with Dirichlet conditions,
//! the Chandrasekhar transform `χ = w/sin²θ`, and the bilinear form `B`.
//!
//! The eigenproblem is discretized by a Legendre–Galerkin method with the
//! basis `φ_k = (P_{k-1} - P_{k+1})/(2k+1)`, `φ_k' = -P_k`. In this basis both
//! the stiffness and the singular potential are diagonal,
//! `∫φ_iφ_j/(1-t²) = δ_ij 2/((2i+1)i(i+1))`, and the mass matrix is pentadiagonal.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::bvp::{Domain, ParamSet, ProfileW, Repr};
use crate::cheb::cgl_nodes;
use crate::error::{Error, Result};
use crate::special::composite_gauss;

const SPLIT_TOL: f64 = 1e-10;

/// Eigenvalues and eigenfunctions of the discretized operator.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub beta: f64,
    /// Number of basis functions.
    pub m: usize,
    /// `true` for `-∂_φ² - β²` on `(0, π)`.
    pub autonomous: bool,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Basis coefficients, one column per eigenfunction, `cᵀGc = 1`.
    pub coefficients: DMatrix<f64>,
    /// CGL nodes on `[-1, 1]` where `values` are tabulated.
    pub grid: Vec<f64>,
    /// `values[(i, n)] = e_n(grid[i])`.
    pub values: DMatrix<f64>,
    /// Number of eigenvalues `≤ 1e-10`.
    pub split_index: usize,
}

fn mass_matrix(m: usize) -> DMatrix<f64> {
    let nrm = |n: usize| 2.0 / (2 * n + 1) as f64;
    let mut g = DMatrix::<f64>::zeros(m, m);
    for i in 1..=m {
        let di = (2 * i + 1) as f64;
        g[(i - 1, i - 1)] = (nrm(i - 1) + nrm(i + 1)) / (di * di);
        if i + 2 <= m {
            let v = -nrm(i + 1) / (di * (2 * i + 5) as f64);
            g[(i - 1, i + 1)] = v;
            g[(i + 1, i - 1)] = v;
        }
    }
    g
}

/// `P_k'(t)` for `k = 0..=n`.
fn legendre_derivatives(n: usize, t: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 2];
    let mut d = vec![0.0; n + 2];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = t;
        d[1] = 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * t * p[k] - kf * p[k - 1]) / (kf + 1.0);
        d[k + 1] = d[k - 1] + (2.0 * kf + 1.0) * p[k];
    }
    d.truncate(n + 1);
    d
}

/// Solves `D c = μ G c` through the shifted pencil `(D + σG) = RRᵀ`.
fn generalized_eigen(d: &DVector<f64>, g: &DMatrix<f64>, shift: f64) -> (Vec<f64>, DMatrix<f64>) {
    let m = d.len();
    let mut sigma = shift;
    let chol = loop {
        let k = DMatrix::from_diagonal(d) + g * sigma;
        if let Some(c) = k.cholesky() {
            break c;
        }
        sigma *= 2.0;
    };
    let l = chol.l();
    // C = L⁻¹ G L⁻ᵀ
    let linv_g = l.solve_lower_triangular(g).expect("nonsingular factor");
    let c = l.solve_lower_triangular(&linv_g.transpose()).expect("nonsingular factor");
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut mu = Vec::with_capacity(m);
    let mut vecs = DMatrix::<f64>::zeros(m, m);
    for (col, &i) in order.iter().enumerate() {
        let tau = eig.eigenvalues[i];
        mu.push(1.0 / tau - sigma);
        let y = eig.eigenvectors.column(i).into_owned();
        let mut cvec = l.transpose().solve_upper_triangular(&y).expect("nonsingular factor");
        let nrm = (cvec.transpose() * g * &cvec)[(0, 0)].sqrt();
        cvec /= nrm;
        vecs.set_column(col, &cvec);
    }
    (mu, vecs)
}

/// Eigensystem of `-L_β` with `m` basis functions.
pub fn assemble_eigensystem(beta: f64, m: usize) -> Result<EigenSystem> {
    if !beta.is_finite() || (-2.0..=0.0).contains(&beta) {
        return Err(Error::Parameter(format!("β ∉ [−2, 0] required, got β = {beta}")));
    }
    if m < 32 {
        return Err(Error::Parameter(format!("M ≥ 32 required, got {m}")));
    }
    let gamma = beta * (beta + 1.0);
    let d = DVector::from_fn(m, |i, _| {
        let k = (i + 1) as f64;
        2.0 / (2.0 * k + 1.0) * (1.0 - gamma / (k * (k + 1.0)))
    });
    let g = mass_matrix(m);
    let (eigenvalues, coefficients) = generalized_eigen(&d, &g, gamma.max(0.0) + 1.0);
    Ok(finish(beta, m, false, eigenvalues, coefficients))
}

/// Eigensystem of `-∂_φ² - β²` on `(0, π)`; exact values are `n² - β²`.
pub fn assemble_autonomous(beta: f64, m: usize) -> Result<EigenSystem> {
    if m < 32 {
        return Err(Error::Parameter(format!("M ≥ 32 required, got {m}")));
    }
    let d = DVector::from_fn(m, |i, _| 2.0 / (2.0 * (i + 1) as f64 + 1.0));
    let g = mass_matrix(m);
    let (mu, coefficients) = generalized_eigen(&d, &g, 1.0);
    // φ = π(t+1)/2, so -∂_φ² = (2/π)² (-∂_t²)
    let scale = (2.0 / std::f64::consts::PI).powi(2);
    let eigenvalues = mu.iter().map(|v| v * scale - beta * beta).collect();
    Ok(finish(beta, m, true, eigenvalues, coefficients))
}

fn finish(beta: f64, m: usize, autonomous: bool, eigenvalues: Vec<f64>, coefficients: DMatrix<f64>) -> EigenSystem {
    let grid = cgl_nodes(m);
    let mut values = DMatrix::<f64>::zeros(grid.len(), m);
    let basis: Vec<Vec<f64>> = grid.iter().map(|&t| legendre_derivatives(m, t)).collect();
    for n in 0..m {
        for (i, &t) in grid.iter().enumerate() {
            values[(i, n)] = (1.0 - t) * (1.0 + t) * q_value(&coefficients, n, &basis[i]);
        }
    }
    let split_index = eigenvalues.iter().filter(|&&v| v <= SPLIT_TOL).count();
    EigenSystem { beta, m, autonomous, eigenvalues, coefficients, grid, values, split_index }
}

/// `Σ c_k P_k'/(k(k+1))`, i.e. `e_n/(1 - t²)`.
fn q_value(c: &DMatrix<f64>, n: usize, dp: &[f64]) -> f64 {
    (1..=c.nrows()).map(|k| c[(k - 1, n)] * dp[k] / (k * (k + 1)) as f64).sum()
}

impl EigenSystem {
    /// Eigenvalues with numerically equal neighbours merged, paired with multiplicities.
    pub fn distinct_eigenvalues(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some(last) if (v - last.0).abs() <= tol * v.abs().max(1.0) => last.1 += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// Eigenfunction `e_n` (0-based) as an L²-normalized profile on `(-1, 1)`.
    pub fn eigenfunction(&self, n: usize) -> Result<ProfileW> {
        if self.autonomous {
            return Err(Error::Contract("autonomous eigenfunctions live on (0, π)".into()));
        }
        if n >= self.m {
            return Err(Error::Contract(format!("mode {n} out of range (M = {})", self.m)));
        }
        let q: Vec<f64> = self
            .grid
            .iter()
            .map(|&t| q_value(&self.coefficients, n, &legendre_derivatives(self.m, t)))
            .collect();
        let params = ParamSet::linear(self.beta)?;
        Ok(ProfileW::factored(params, &q))
    }
}

/// `χ` and `χ'` on a θ-grid: the composite Gauss nodes plus both poles.
#[derive(Debug, Clone)]
pub struct ChiProfile {
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    /// Quadrature weights in θ (zero at the poles).
    pub weights: Vec<f64>,
}

/// Composite Gauss in θ: 16 panels of 64 points.
fn theta_rule() -> (Vec<f64>, Vec<f64>) {
    composite_gauss(0.0, std::f64::consts::PI, 16, 64)
}

/// Composite Gauss in t on `[-1, 1]`, same layout.
fn t_rule() -> (Vec<f64>, Vec<f64>) {
    composite_gauss(-1.0, 1.0, 16, 64)
}

fn check_dirichlet(w: &ProfileW) -> Result<()> {
    if w.domain != Domain::Interval {
        return Err(Error::Contract("profile must live on (−1, 1)".into()));
    }
    let (a, b) = w.boundary_values();
    if a.abs() > 1e-10 || b.abs() > 1e-10 {
        return Err(Error::Contract(format!("profile does not vanish at ±1: w(−1) = {a:e}, w(1) = {b:e}")));
    }
    Ok(())
}

/// Chandrasekhar transform `χ(θ) = w(cosθ)/sin²θ`, with the pole values
/// taken from the exact limits.
pub fn chandrasekhar(w: &ProfileW) -> Result<ChiProfile> {
    check_dirichlet(w)?;
    let (th, wt) = theta_rule();
    let mut theta = vec![0.0];
    theta.extend(th);
    theta.push(std::f64::consts::PI);
    let mut weights = vec![0.0];
    weights.extend(wt);
    weights.push(0.0);
    let (values, derivs) = theta.iter().map(|&t| w.chi(t)).unzip();
    Ok(ChiProfile { theta, values, derivs, weights })
}

/// `∫(χ'² + (2+β)(1-β)χ²) sin³θ / ∫ sin⁵θ χ²`.
pub fn rayleigh_quotient(chi: &ChiProfile, beta: f64) -> Result<f64> {
    let k = (2.0 + beta) * (1.0 - beta);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..chi.theta.len() {
        let s = chi.theta[i].sin();
        let s3 = s * s * s;
        let (c, d) = (chi.values[i], chi.derivs[i]);
        num += chi.weights[i] * (d * d + k * c * c) * s3;
        den += chi.weights[i] * c * c * s3 * s * s;
    }
    if den == 0.0 {
        return Err(Error::Contract("χ vanishes identically".into()));
    }
    Ok(num / den)
}

/// Both sides of the two isometry identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport {
    /// `∫w'η' dt` and `∫(χ'ξ' + 2χξ) sin³θ dθ`.
    pub gradient: (f64, f64),
    /// `∫wη/(1-t²) dt` and `∫χξ sin³θ dθ`.
    pub weighted: (f64, f64),
}

/// `w/(1-t²)` with the exact factor when available.
fn over_weight(w: &ProfileW, t: f64) -> f64 {
    w.ratio(t).unwrap_or_else(|| w.eval(t) / ((1.0 - t) * (1.0 + t)))
}

pub fn isometry_check(w: &ProfileW, eta: &ProfileW) -> Result<IsometryReport> {
    check_dirichlet(w)?;
    check_dirichlet(eta)?;
    let (ts, tw) = t_rule();
    let (mut g_t, mut w_t) = (0.0, 0.0);
    for (&t, &q) in ts.iter().zip(&tw) {
        let (a, da, _) = w.eval3(t);
        let (_, db, _) = eta.eval3(t);
        g_t += q * da * db;
        w_t += q * a * over_weight(eta, t);
    }
    let (th, thw) = theta_rule();
    let (mut g_th, mut w_th) = (0.0, 0.0);
    for (&t, &q) in th.iter().zip(&thw) {
        let s3 = t.sin().powi(3);
        let (c1, d1) = w.chi(t);
        let (c2, d2) = eta.chi(t);
        g_th += q * (d1 * d2 + 2.0 * c1 * c2) * s3;
        w_th += q * c1 * c2 * s3;
    }
    Ok(IsometryReport { gradient: (g_t, g_th), weighted: (w_t, w_th) })
}

/// `∫ f(t) dt` through `t = cosθ`, which keeps nodes away from `t = ±1`.
fn integrate_t(f: impl Fn(f64, f64) -> f64) -> f64 {
    let (th, thw) = theta_rule();
    th.iter().zip(&thw).map(|(&t, &q)| q * t.sin() * f(t.cos(), t)).sum()
}

/// `B(w, η) = ∫(w'η' - β(β+1)wη/(1-t²)) dt`.
pub fn bilinear_b(w: &ProfileW, eta: &ProfileW, beta: f64) -> f64 {
    let gamma = beta * (beta + 1.0);
    integrate_t(|t, th| {
        let (_, da, _) = w.eval3(t);
        let (_, db, _) = eta.eval3(t);
        // wη/(1-t²) = χξ sin²θ
        let (c1, _) = w.chi(th);
        let (c2, _) = eta.chi(th);
        da * db - gamma * c1 * c2 * th.sin().powi(2)
    })
}

/// `∫ wη dt`.
pub fn inner_l2(w: &ProfileW, eta: &ProfileW) -> f64 {
    integrate_t(|t, _| w.eval(t) * eta.eval(t))
}

/// `∫ w'η' dt`.
pub fn inner_h1(w: &ProfileW, eta: &ProfileW) -> f64 {
    integrate_t(|t, _| w.eval3(t).1 * eta.eval3(t).1)
}

/// Splits `w = y + z` with `y` in the span of the nonpositive modes.
pub fn decompose(w: &ProfileW, sys: &EigenSystem) -> Result<(ProfileW, ProfileW)> {
    if sys.autonomous {
        return Err(Error::Contract("decompose needs the nonautonomous eigensystem".into()));
    }
    check_dirichlet(w)?;
    let n = sys.split_index;
    let params = ParamSet::linear(sys.beta)?;
    let mut q = vec![0.0; sys.grid.len()];
    for k in 0..n {
        let e = sys.eigenfunction(k)?;
        let a = inner_l2(w, &e);
        if let Repr::Factored { q: qc, .. } = &e.repr {
            for (qi, &t) in q.iter_mut().zip(&sys.grid) {
                *qi += a * qc.eval(t);
            }
        }
    }
    let y = ProfileW::factored(params, &q);
    let z = ProfileW::combination(vec![(1.0, w.with_params(params)), (-1.0, y.clone())])?;
    Ok((y, z))
}

/// Hardy's inequality sides `(∫w²/(1-t)², 4∫w'²)`.
pub fn hardy_sides(w: &ProfileW) -> (f64, f64) {
    let lhs = integrate_t(|t, th| {
        // w/(1-t) = χ sin²θ/(1-cosθ) = χ (1+cosθ)
        let (c, _) = w.chi(th);
        let v = c * (1.0 + t);
        v * v
    });
    let rhs = 4.0 * integrate_t(|t, _| w.eval3(t).1.powi(2));
    (lhs, rhs)
}

/// `(|∫wη/(1-t²)|, 2‖w'‖‖η‖)`.
pub fn weighted_product_bound(w: &ProfileW, eta: &ProfileW) -> (f64, f64) {
    let lhs = integrate_t(|_, th| {
        let (c1, _) = w.chi(th);
        let (c2, _) = eta.chi(th);
        c1 * c2 * th.sin().powi(2)
    });
    let dw = integrate_t(|t, _| w.eval3(t).1.powi(2)).sqrt();
    let eta_n = inner_l2(eta, eta).sqrt();
    (lhs.abs(), 2.0 * dw * eta_n)
}

/// Smallest sampled `B(z,z)/‖z'‖²` over random `z` in the positive subspace,
/// drawn from the span of the `modes` eigenfunctions after the split index.
pub fn coercivity_constant(sys: &EigenSystem, modes: usize, samples: usize, rng: &mut impl Rng) -> Result<f64> {
    let n = sys.split_index;
    let hi = (n + modes).min(sys.m);
    let es: Vec<ProfileW> = (n..hi).map(|k| sys.eigenfunction(k)).collect::<Result<_>>()?;
    // B is diagonal in the eigenbasis; the H¹ Gram matrix is assembled once
    let k = es.len();
    let mut h = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = inner_h1(&es[i], &es[j]);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let a = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
        let num: f64 = (0..k).map(|i| sys.eigenvalues[n + i] * a[i] * a[i]).sum();
        let den = (a.transpose() * &h * &a)[(0, 0)];
        best = best.min(num / den);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::w_profile;

    #[test]
    fn autonomous_spectrum_is_exact() {
        for beta in [0.5, 1.5, 3.0] {
            let sys = assemble_autonomous(beta, 128).unwrap();
            for n in 1..=10 {
                let exact = (n * n) as f64 - beta * beta;
                assert!((sys.eigenvalues[n - 1] - exact).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn kernel_at_integer_beta() {
        let sys = assemble_eigensystem(2.0, 128).unwrap();
        let k = sys.eigenvalues.iter().position(|v| v.abs() < 1e-8).expect("kernel");
        let e = sys.eigenfunction(k).unwrap();
        let w = ProfileW::catalog(2).unwrap();
        let nrm = inner_l2(&w, &w).sqrt();
        let sign = (e.eval(0.5) / w.eval(0.5)).signum();
        for i in 0..=100 {
            let t = -1.0 + 0.02 * i as f64;
            assert!((sign * e.eval(t) - w.eval(t) / nrm).abs() < 1e-6);
        }
    }

    #[test]
    fn chi_of_w3() {
        let w = ProfileW::from_poly(ParamSet::linear(2.0).unwrap(), w_profile(2).unwrap());
        let chi = chandrasekhar(&w).unwrap();
        for (t, v) in chi.theta.iter().zip(&chi.values) {
            assert!((v - t.cos() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rayleigh_of_constant() {
        let w = ProfileW::catalog(1).unwrap();
        let chi = chandrasekhar(&w).unwrap();
        for beta in [0.5, 2.0, -3.0] {
            let r = rayleigh_quotient(&chi, beta).unwrap();
            assert!((r - 1.25 * (2.0 + beta) * (1.0 - beta)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_forbidden_beta() {
        assert!(assemble_eigensystem(-1.0, 64).is_err());
        assert!(assemble_eigensystem(1.0, 16).is_err());
    }
}
