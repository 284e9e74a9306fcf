//! Legendre functions and the closed-form solution catalog.
//!
//! The integrated Legendre polynomials `w_{n+1}(t) = -∫_{-1}^t P_n` are the
//! profiles of the irrotational axisymmetric flows. Their monomial
//! coefficients are kept as exact rationals.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::Vec3;

type Q = Ratio<i128>;

/// `P_n(t)` by the Bonnet recurrence.
pub fn legendre_p(n: i64, t: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!("Legendre degree must be >= 0, got {n}")));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("|t| <= 1 required, got {t}")));
    }
    Ok(legendre_pair(n as usize, t).0)
}

/// `(P_n(t), P_n'(t))`, valid for any real t.
pub fn legendre_pair(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    let (mut d0, mut d1) = (0.0, 1.0);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Composite Gauss-Legendre rule on [a, b].
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut x = Vec::with_capacity(panels * order);
    let mut w = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in gx.iter().zip(&gw) {
            x.push(lo + 0.5 * h * (xi + 1.0));
            w.push(0.5 * h * wi);
        }
    }
    (x, w)
}

/// Polynomial in monomial form on t ∈ [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PolyProfile {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    exact: Vec<Q>,
}

impl PolyProfile {
    fn from_exact(mut exact: Vec<Q>) -> Self {
        while exact.len() > 1 && *exact.last().unwrap() == Q::from_integer(0) {
            exact.pop();
        }
        let coefficients = exact.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
        PolyProfile { degree: exact.len() - 1, coefficients, exact }
    }

    /// Exact coefficient `k` as (numerator, denominator).
    pub fn exact_coefficient(&self, k: usize) -> (i128, i128) {
        let q = self.exact.get(k).copied().unwrap_or_else(|| Q::from_integer(0));
        (*q.numer(), *q.denom())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> PolyProfile {
        if self.exact.len() <= 1 {
            return PolyProfile::from_exact(vec![Q::from_integer(0)]);
        }
        let d = self
            .exact
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Q::from_integer(k as i128))
            .collect();
        PolyProfile::from_exact(d)
    }

    /// Value and first two derivatives.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            ddp = ddp * t + 2.0 * dp;
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp, ddp)
    }

    /// Exact quotient by (1 - t²); `None` unless the division is exact.
    pub fn div_one_minus_t2(&self) -> Option<PolyProfile> {
        let n = self.exact.len();
        if n < 3 {
            return None;
        }
        // w = (1 - t²) q, solve from the top coefficient down.
        let mut rem = self.exact.clone();
        let mut q = vec![Q::from_integer(0); n - 2];
        for k in (0..n - 2).rev() {
            let qk = -rem[k + 2];
            q[k] = qk;
            rem[k + 2] += qk;
            rem[k] -= qk;
        }
        if rem.iter().all(|c| *c == Q::from_integer(0)) {
            Some(PolyProfile::from_exact(q))
        } else {
            None
        }
    }
}

/// Exact monomial coefficients of `P_n`.
pub fn legendre_coefficients(n: usize) -> Vec<(i128, i128)> {
    legendre_exact(n).iter().map(|q| (*q.numer(), *q.denom())).collect()
}

fn legendre_exact(n: usize) -> Vec<Q> {
    let mut p0 = vec![Q::from_integer(1)];
    if n == 0 {
        return p0;
    }
    let mut p1 = vec![Q::from_integer(0), Q::from_integer(1)];
    for k in 1..n {
        let kk = k as i128;
        let mut p2 = vec![Q::from_integer(0); k + 2];
        for (j, c) in p1.iter().enumerate() {
            p2[j + 1] += c * Q::new(2 * kk + 1, kk + 1);
        }
        for (j, c) in p0.iter().enumerate() {
            p2[j] -= c * Q::new(kk, kk + 1);
        }
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_n` as a polynomial profile.
pub fn legendre_profile(n: usize) -> PolyProfile {
    PolyProfile::from_exact(legendre_exact(n))
}

/// The catalog profile `w_{n+1}(t) = -∫_{-1}^t P_n(s) ds`.
pub fn w_profile(n: i64) -> Result<PolyProfile> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "w_{{n+1}} needs n >= 1 (n = {n}); the alpha = 2 flow has no polynomial stream profile"
        )));
    }
    let p = legendre_exact(n as usize);
    let mut anti = vec![Q::from_integer(0); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        anti[k + 1] = -c / Q::from_integer(k as i128 + 1);
    }
    // fix the constant so the value at t = -1 vanishes
    let at_minus_one = anti
        .iter()
        .enumerate()
        .fold(Q::from_integer(0), |acc, (k, c)| if k % 2 == 0 { acc + c } else { acc - c });
    anti[0] -= at_minus_one;
    Ok(PolyProfile::from_exact(anti))
}

/// `w_{n+1}(t)`.
pub fn w_poly(n: i64, t: f64) -> Result<f64> {
    Ok(w_profile(n)?.eval(t))
}

/// Profile index of the axisymmetric irrotational flow with stream function
/// `w(cosθ)/ρⁿ`: `n` itself for n ≥ 1, `-1-n` for n ≤ -2.
pub fn catalog_profile_index(n: i64) -> Result<i64> {
    match n {
        n if n >= 1 => Ok(n),
        n if n <= -2 => Ok(-1 - n),
        0 => Err(Error::Domain("n = 0 is the alpha = 2 radial flow, it has no stream profile".into())),
        _ => Err(Error::Domain("n = -1 (alpha = 1) admits no irrotational flow".into())),
    }
}

fn check_point(x: &Vec3) -> Result<()> {
    if x.iter().all(|c| *c == 0.0) {
        return Err(Error::Domain("point at the origin".into()));
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("non-finite point".into()));
    }
    Ok(())
}

/// Irrotational axisymmetric flow `u = ∇×(ψ∇φ)` with `ψ = w(cosθ)/ρⁿ`,
/// and `u = x/ρ³` for the sentinel `n = 0` (α = 2). Pressure `p = -|u|²/2`.
pub fn irrotational_axisymmetric(n: i64, x: Vec3) -> Result<(Vec3, f64)> {
    check_point(&x)?;
    let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let rho = rho2.sqrt();
    if n == 0 {
        let s = 1.0 / (rho2 * rho);
        let u = [x[0] * s, x[1] * s, x[2] * s];
        return Ok((u, -0.5 * dot(&u, &u)));
    }
    let w = w_profile(catalog_profile_index(n)?)?;
    let q = w.div_one_minus_t2().expect("catalog profiles vanish at both ends");
    let r = x[0].hypot(x[1]);
    let z = x[2];
    let t = z / rho;
    let nf = n as f64;
    let (_, dw, _) = w.eval3(t);
    let qv = q.eval(t);
    // ψ = (r/ρ)² q(t) ρ^{-n}; u_r = -∂zψ / r, u_z = ∂rψ / r
    let ur = -dw * r * rho.powf(-nf - 3.0) + nf * qv * z * r * rho.powf(-nf - 4.0);
    let uz = -dw * z * rho.powf(-nf - 3.0) - nf * qv * (r * r) * rho.powf(-nf - 4.0);
    let (c, s) = if r > 0.0 { (x[0] / r, x[1] / r) } else { (1.0, 0.0) };
    let u = [ur * c, ur * s, uz];
    Ok((u, -0.5 * dot(&u, &u)))
}

/// Planar irrotational flow with `ψ = sin(nφ)/rⁿ`, `u = (∂₂ψ, -∂₁ψ)`;
/// the sentinel `n = 0` (α = 1) is the radial field `x/r²`.
pub fn irrotational_2d(n: i64, x: [f64; 2]) -> Result<[f64; 2]> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 == 0.0 {
        return Err(Error::Domain("point at the origin".into()));
    }
    if n == 0 {
        return Ok([x[0] / r2, x[1] / r2]);
    }
    let r = r2.sqrt();
    let phi = x[1].atan2(x[0]);
    let nf = n as f64;
    let (sn, cn) = (nf * phi).sin_cos();
    let psi_r = -nf * r.powf(-nf - 1.0) * sn;
    let psi_phi_over_r = nf * r.powf(-nf - 1.0) * cn;
    let (c, s) = (x[0] / r, x[1] / r);
    let d1 = c * psi_r - s * psi_phi_over_r;
    let d2 = s * psi_r + c * psi_phi_over_r;
    Ok([d2, -d1])
}

/// Straight-streamline flow supported in the cone `a²r² > b²z²`.
pub fn geodesic_flow(x: Vec3, a: f64, b: f64, alpha: f64) -> Result<Vec3> {
    if (a * a + b * b - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("a² + b² = 1 required, got {}", a * a + b * b)));
    }
    if alpha > 0.0 {
        return Err(Error::Parameter(format!("alpha <= 0 required, got {alpha}")));
    }
    let r2 = x[0] * x[0] + x[1] * x[1];
    let k = a * a * r2 - b * b * x[2] * x[2];
    if k <= 0.0 {
        return Ok([0.0; 3]);
    }
    if r2 == 0.0 && b != 0.0 {
        return Err(Error::Domain("r = 0 with b != 0".into()));
    }
    if b == 0.0 {
        return Ok([0.0, 0.0, k.powf(-alpha / 2.0)]);
    }
    let radial = b * b * x[2] / r2 * k.powf(-alpha / 2.0);
    let swirl = b / r2 * k.powf((1.0 - alpha) / 2.0);
    let axial = a * a * k.powf(-alpha / 2.0);
    Ok([radial * x[0] + swirl * x[1], radial * x[1] - swirl * x[0], axial])
}

/// Circular flow `u = a r^{-α-1}(-x₂, x₁, 0)`, `p = -(a²/2α) r^{-2α}`.
pub fn circular_flow(x: [f64; 2], a: f64, alpha: f64) -> Result<(Vec3, f64)> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 == 0.0 {
        return Err(Error::Domain("point at the origin".into()));
    }
    if alpha == 0.0 {
        return Err(Error::Parameter("alpha != 0 required for the circular-flow pressure".into()));
    }
    let r = r2.sqrt();
    let s = a * r.powf(-alpha - 1.0);
    Ok(([-s * x[1], s * x[0], 0.0], -(a * a / (2.0 * alpha)) * r.powf(-2.0 * alpha)))
}

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_anchors() {
        assert_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert!((legendre_p(5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((legendre_p(2, 0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(legendre_p(-1, 0.0).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(w_profile(1).unwrap().exact, vec![Q::new(1, 2), Q::from_integer(0), Q::new(-1, 2)]);
        assert!((w_poly(2, 0.5).unwrap() - 3.0 / 16.0).abs() < 1e-15);
        assert!((w_poly(3, 0.0).unwrap() + 0.125).abs() < 1e-15);
        assert!(w_poly(0, 0.0).is_err());
    }

    #[test]
    fn gauss_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn exact_quotient() {
        let q = w_profile(2).unwrap().div_one_minus_t2().unwrap();
        assert_eq!(q.exact_coefficient(1), (1, 2));
        assert!(legendre_profile(2).div_one_minus_t2().is_none());
    }

    #[test]
    fn catalog_examples() {
        let (u, _) = irrotational_axisymmetric(0, [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(u, [1.0, 0.0, 0.0]);
        let (u, _) = irrotational_axisymmetric(1, [0.0, 0.0, 1.0]).unwrap();
        assert!(u[0].abs() < 1e-15 && u[1].abs() < 1e-15 && u[2] != 0.0);
        let v = irrotational_2d(-1, [0.3, -2.0]).unwrap();
        let v2 = irrotational_2d(-1, [5.0, 1.0]).unwrap();
        assert!((v[0] - v2[0]).abs() < 1e-14 && (v[1] - v2[1]).abs() < 1e-14);
        let v = irrotational_2d(0, [0.0, 1.0]).unwrap();
        assert!((v[0]).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_flows() {
        let u = geodesic_flow([1.0, 0.0, 0.0], 1.0, 0.0, -1.0).unwrap();
        assert_eq!(u, [0.0, 0.0, 1.0]);
        let h = 0.5f64.sqrt();
        assert_eq!(geodesic_flow([0.0, 0.0, 1.0], h, h, -2.0).unwrap(), [0.0; 3]);
        assert!(geodesic_flow([1.0, 0.0, 0.0], 1.0, 1.0, -1.0).is_err());
        let (u, p) = circular_flow([1.0, 0.0], 1.0, 2.0).unwrap();
        assert_eq!(u, [0.0, 1.0, 0.0]);
        assert!((p + 0.25).abs() < 1e-15);
        let (u, _) = circular_flow([0.0, 2.0], 1.0, 1.0).unwrap();
        assert!((u[0] + 0.5).abs() < 1e-15 && u[1].abs() < 1e-15);
        assert!(circular_flow([1.0, 0.0], 1.0, 0.0).is_err());
    }
}
