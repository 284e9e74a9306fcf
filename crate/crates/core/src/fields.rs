//! Homogeneous velocity and pressure fields reconstructed from profiles.
//!
//! Axisymmetric fields use the polar form in `(ρ, θ)` with `χ = w(cosθ)/sin²θ`;
//! 2½D fields use `ψ = w(φ)/r^β` with `w` extended oddly to `[-π, π]`.
//! Evaluators are generic over [`Scalar`], so gradients and Hessians come from
//! forward-mode jets. The profile enters through a cubic Taylor polynomial in
//! the angle whose higher coefficients are recovered from the ODE.

use serde::{Deserialize, Serialize};

use crate::bvp::{Mode, ParamSet, ProfileW};
use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar};
use crate::special::catalog_profile_index;
use crate::Vec3;

/// Profiles must be certified to this residual before a field is built.
pub const CERTIFICATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Axisymmetric,
    Planar25d,
    Catalog,
}

#[derive(Debug, Clone)]
pub enum FieldKind {
    Axisymmetric(ProfileW),
    Planar(ProfileW),
    /// `u = x/ρ³` (α = 2).
    Radial3d,
    /// `u = x/r²` in the plane (α = 1).
    Radial2d,
    /// Straight-streamline flow supported in `a²r² > b²z²`.
    Geodesic { a: f64, b: f64 },
    /// `u = a r^{-α-1}(-x₂, x₁, 0)`.
    Circular { a: f64 },
}

/// Field values at a point, generic over the scalar type.
#[derive(Debug, Clone, Copy)]
pub struct State<T> {
    pub u: [T; 3],
    pub p: T,
    pub psi: T,
    /// `Γ` (axisymmetric) or `G` (2½D).
    pub gamma: T,
    pub pi: T,
}

#[derive(Debug, Clone)]
pub struct HomogeneousField {
    pub mode: FieldMode,
    pub alpha: f64,
    pub kind: FieldKind,
    /// Constants `C₁`, `C₂` (zero for catalog fields).
    pub big_c1: f64,
    pub big_c2: f64,
}

/// `c₀ + c₁δ + c₂δ²/2 + c₃δ³/6` and its derivative.
#[derive(Debug, Clone, Copy)]
struct Taylor {
    x0: f64,
    c: [f64; 4],
}

impl Taylor {
    fn eval<T: Scalar>(&self, x: T) -> (T, T) {
        let d = x - T::cst(self.x0);
        let [c0, c1, c2, c3] = self.c;
        let v = T::cst(c0) + d * (T::cst(c1) + d * (T::cst(c2 / 2.0) + d * T::cst(c3 / 6.0)));
        let dv = T::cst(c1) + d * (T::cst(c2) + d * T::cst(c3 / 2.0));
        (v, dv)
    }
}

fn certified(w: &ProfileW) -> Result<()> {
    if !(w.residual_certificate < CERTIFICATION_TOL) {
        return Err(Error::Contract(format!(
            "profile residual {:.3e} exceeds the certification tolerance {CERTIFICATION_TOL:e}",
            w.residual_certificate
        )));
    }
    Ok(())
}

fn same_equation(w: &ProfileW, params: &ParamSet) -> Result<()> {
    let p = &w.params;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    if p.mode != params.mode || !close(p.beta, params.beta) || !close(p.c1, params.c1) || !close(p.c2, params.c2) {
        return Err(Error::Contract("profile was solved for different equation coefficients".into()));
    }
    Ok(())
}

impl HomogeneousField {
    /// Axisymmetric field from a certified profile on `(-1, 1)`.
    pub fn build_axisymmetric(w: &ProfileW, params: &ParamSet) -> Result<HomogeneousField> {
        if params.mode != Mode::Axisymmetric {
            return Err(Error::Contract("axisymmetric field needs axisymmetric-mode parameters".into()));
        }
        same_equation(w, params)?;
        certified(w)?;
        Ok(HomogeneousField {
            mode: FieldMode::Axisymmetric,
            alpha: params.alpha,
            kind: FieldKind::Axisymmetric(w.clone()),
            big_c1: params.big_c1,
            big_c2: params.big_c2,
        })
    }

    /// 2½D field from a certified profile on `(0, π)`.
    pub fn build_25d(w: &ProfileW, params: &ParamSet) -> Result<HomogeneousField> {
        if params.mode != Mode::Planar {
            return Err(Error::Contract("2½D field needs planar-mode parameters".into()));
        }
        same_equation(w, params)?;
        certified(w)?;
        Ok(HomogeneousField {
            mode: FieldMode::Planar25d,
            alpha: params.alpha,
            kind: FieldKind::Planar(w.clone()),
            big_c1: params.big_c1,
            big_c2: params.big_c2,
        })
    }

    fn catalog(alpha: f64, kind: FieldKind) -> HomogeneousField {
        HomogeneousField { mode: FieldMode::Catalog, alpha, kind, big_c1: 0.0, big_c2: 0.0 }
    }

    /// Irrotational axisymmetric flow with stream function `w(cosθ)/ρⁿ`
    /// (`n = 0`: the radial flow `x/ρ³`).
    pub fn catalog_axisymmetric(n: i64) -> Result<HomogeneousField> {
        if n == 0 {
            return Ok(Self::catalog(2.0, FieldKind::Radial3d));
        }
        let idx = catalog_profile_index(n)?;
        let w = ProfileW::catalog(idx)?.with_params(ParamSet::linear(n as f64)?);
        Ok(Self::catalog(n as f64 + 2.0, FieldKind::Axisymmetric(w)))
    }

    /// Planar irrotational flow with `ψ = sin(nφ)/rⁿ` (`n = 0`: `x/r²`).
    pub fn catalog_2d(n: i64) -> Result<HomogeneousField> {
        if n == 0 {
            return Ok(Self::catalog(1.0, FieldKind::Radial2d));
        }
        let w = ProfileW::sine(n as f64)?;
        Ok(Self::catalog(n as f64 + 1.0, FieldKind::Planar(w)))
    }

    pub fn geodesic(a: f64, b: f64, alpha: f64) -> Result<HomogeneousField> {
        if (a * a + b * b - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("a² + b² = 1 required, got {}", a * a + b * b)));
        }
        if alpha > 0.0 {
            return Err(Error::Parameter(format!("alpha <= 0 required, got {alpha}")));
        }
        Ok(Self::catalog(alpha, FieldKind::Geodesic { a, b }))
    }

    pub fn circular(a: f64, alpha: f64) -> Result<HomogeneousField> {
        if alpha == 0.0 {
            return Err(Error::Parameter("alpha != 0 required for the circular-flow pressure".into()));
        }
        Ok(Self::catalog(alpha, FieldKind::Circular { a }))
    }

    /// Profile, if the field is built from one.
    pub fn profile(&self) -> Option<&ProfileW> {
        match &self.kind {
            FieldKind::Axisymmetric(w) | FieldKind::Planar(w) => Some(w),
            _ => None,
        }
    }

    /// `true` when the field is axisymmetric about the `z`-axis.
    pub fn is_axisymmetric(&self) -> bool {
        matches!(self.kind, FieldKind::Axisymmetric(_) | FieldKind::Radial3d | FieldKind::Geodesic { .. })
    }

    /// `true` when the field depends only on `(x, y)`.
    pub fn is_planar(&self) -> bool {
        matches!(self.kind, FieldKind::Planar(_) | FieldKind::Radial2d | FieldKind::Circular { .. })
    }

    fn chi_taylor(w: &ProfileW, theta0: f64) -> Taylor {
        let p = &w.params;
        let b = p.beta;
        let k = (b - 1.0) * (b + 2.0);
        let (c0, c1) = w.chi(theta0);
        let g = |th: Jet<f64, 1>, chi: Jet<f64, 1>| {
            let s = th.sin();
            let ww = s * s * chi;
            let mut r = Jet::<f64, 1>::cst(0.0);
            if p.c1 != 0.0 {
                r = r + (s * s * chi * ww.abs_pow(4.0 / b)).scale(p.c1);
            }
            if p.c2 != 0.0 {
                r = r + (chi * ww.abs_pow(2.0 / b)).scale(p.c2);
            }
            r
        };
        let sn = theta0.sin();
        if sn.abs() < 1e-10 {
            let gv = g(Jet::constant(theta0), Jet::constant(c0)).v;
            return Taylor { x0: theta0, c: [c0, 0.0, -(k * c0 + gv) / 4.0, 0.0] };
        }
        let gj = g(Jet::var(theta0, 0), Jet { v: c0, d: [c1] });
        let cot = theta0.cos() / sn;
        let c2 = -3.0 * cot * c1 - k * c0 - gj.v;
        let c3 = 3.0 * c1 / (sn * sn) - 3.0 * cot * c2 - k * c1 - gj.d[0];
        Taylor { x0: theta0, c: [c0, c1, c2, c3] }
    }

    /// Profile jet in `φ ∈ (-π, π]` using the odd extension.
    fn w_taylor(w: &ProfileW, phi0: f64) -> Taylor {
        let p = &w.params;
        let b = p.beta;
        let (sg, x) = if phi0 < 0.0 { (-1.0, -phi0) } else { (1.0, phi0) };
        let (v, d1, d2) = w.eval3(x);
        let (v, d1, d2) = (sg * v, d1, sg * d2);
        let d3 = -b * b * d1 - p.c2 * (1.0 + 2.0 / b) * v.abs().powf(2.0 / b) * d1;
        Taylor { x0: phi0, c: [v, d1, d2, d3] }
    }

    /// Velocity, pressure and Clebsch data at `x`.
    pub fn state<T: Scalar>(&self, x: [T; 3]) -> State<T> {
        let zero = T::cst(0.0);
        match &self.kind {
            FieldKind::Axisymmetric(w) => {
                let b = w.params.beta;
                let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let rho = rho2.sqrt();
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let (s, c) = (r / rho, x[2] / rho);
                let theta = r.atan2(x[2]);
                let tay = Self::chi_taylor(w, theta.re());
                let (chi, dchi) = tay.eval(theta);
                let a = rho.powf(-b - 2.0);
                let ur = a * (dchi * s + T::cst(2.0) * chi * c);
                let ut = a * chi.scale(b);
                let mut u = [
                    ur * x[0] / rho + ut * c * x[0] / rho,
                    ur * x[1] / rho + ut * c * x[1] / rho,
                    ur * x[2] / rho - ut * s * s,
                ];
                let psi = rho.powf(-b) * s * s * chi;
                let c2 = self.big_c2;
                let mut gamma = zero;
                if c2 != 0.0 {
                    // u^φ e_φ = ρ^{-β-3} C₂ χ|χ|^{1/β} s^{2/β} (-y, x, 0)
                    let sw = a / rho * chi.signed_pow(1.0 / b) * s.powf(2.0 / b);
                    let sw = sw.scale(c2);
                    u[0] = u[0] - sw * x[1];
                    u[1] = u[1] + sw * x[0];
                    gamma = psi.signed_pow(1.0 / b).scale(c2);
                }
                let pi = if self.big_c1 != 0.0 { psi.abs_pow(2.0 + 4.0 / b).scale(self.big_c1) } else { zero };
                let p = pi - (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).scale(0.5);
                State { u, p, psi, gamma, pi }
            }
            FieldKind::Planar(w) => {
                let b = w.params.beta;
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let phi = x[1].atan2(x[0]);
                let tay = Self::w_taylor(w, phi.re());
                let (wv, dw) = tay.eval(phi);
                let a = r.powf(-b - 1.0);
                let (er, ep) = ([x[0] / r, x[1] / r], [-x[1] / r, x[0] / r]);
                let radial = a * dw;
                let angular = a * wv.scale(b);
                let u3 = if self.big_c2 != 0.0 { (a * wv.signed_pow(1.0 / b)).scale(self.big_c2) } else { zero };
                let u = [radial * er[0] + angular * ep[0], radial * er[1] + angular * ep[1], u3];
                let psi = wv / r.powf(b);
                let gamma = if self.big_c2 != 0.0 { psi.signed_pow(1.0 / b).scale(self.big_c2) } else { zero };
                let pi = if self.big_c1 != 0.0 { psi.abs_pow(2.0 + 2.0 / b).scale(self.big_c1) } else { zero };
                let p = pi - (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).scale(0.5);
                State { u, p, psi, gamma, pi }
            }
            FieldKind::Radial3d => {
                let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let rho = rho2.sqrt();
                let k = T::cst(1.0) / (rho2 * rho);
                let u = [x[0] * k, x[1] * k, x[2] * k];
                let p = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).scale(-0.5);
                State { u, p, psi: -x[2] / rho, gamma: zero, pi: zero }
            }
            FieldKind::Radial2d => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let u = [x[0] / r2, x[1] / r2, zero];
                let p = (u[0] * u[0] + u[1] * u[1]).scale(-0.5);
                State { u, p, psi: x[1].atan2(x[0]), gamma: zero, pi: zero }
            }
            FieldKind::Geodesic { a, b } => {
                let u = geodesic(x, *a, *b, self.alpha);
                State { u, p: zero, psi: zero, gamma: zero, pi: zero }
            }
            FieldKind::Circular { a } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let r = r2.sqrt();
                let s = r.powf(-self.alpha - 1.0).scale(*a);
                let p = r.powf(-2.0 * self.alpha).scale(-(a * a) / (2.0 * self.alpha));
                State { u: [-s * x[1], s * x[0], zero], p, psi: zero, gamma: zero, pi: zero }
            }
        }
    }

    /// `(u, p)` at a point, with the zero limit at the origin for `α < 0`.
    pub fn evaluate(&self, x: Vec3) -> Result<(Vec3, f64)> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite point".into()));
        }
        let singular_set = if self.is_planar() { x[0] == 0.0 && x[1] == 0.0 } else { x.iter().all(|&v| v == 0.0) };
        if singular_set {
            if self.alpha < 0.0 {
                return Ok(([0.0; 3], 0.0));
            }
            return Err(Error::Domain(format!("origin is singular for α = {} ≥ 0", self.alpha)));
        }
        let s = self.state(x);
        Ok((s.u, s.p))
    }

    /// `ψ` at a point.
    pub fn psi(&self, x: Vec3) -> f64 {
        self.state(x).psi
    }

    /// Proportionality factor `∇×u = φ u` of a Beltrami field (`C₁ = 0`).
    pub fn beltrami_factor(&self, x: Vec3) -> Result<f64> {
        let b = match &self.kind {
            FieldKind::Axisymmetric(w) | FieldKind::Planar(w) => w.params.beta,
            _ => return Err(Error::Contract("Beltrami factor needs a Clebsch field".into())),
        };
        if self.big_c1 != 0.0 {
            return Err(Error::Contract(format!("C₁ = {} ≠ 0: the field is not Beltrami", self.big_c1)));
        }
        let psi = self.psi(x);
        Ok(self.big_c2 * (1.0 + 1.0 / b) * psi.abs().powf(1.0 / b))
    }

    /// `(a, b, f)` of the sphere decomposition `ρ^α u = a e_θ + b e_φ + f e_ρ`
    /// at polar angle `θ`, for axisymmetric fields.
    pub fn sphere_profile(&self, theta: f64) -> Result<(f64, f64, f64)> {
        match &self.kind {
            FieldKind::Axisymmetric(w) => {
                let bt = w.params.beta;
                let (chi, dchi) = w.chi(theta);
                let (s, c) = theta.sin_cos();
                let f = dchi * s + 2.0 * chi * c;
                let a = bt * chi * s;
                let sw = if self.big_c2 != 0.0 {
                    self.big_c2 * chi * chi.abs().powf(1.0 / bt) * s.abs().powf(1.0 + 2.0 / bt)
                } else {
                    0.0
                };
                Ok((a, sw, f))
            }
            _ => Err(Error::Contract("sphere profile needs an axisymmetric profile field".into())),
        }
    }
}

/// Generic form of the straight-streamline flow.
pub fn geodesic<T: Scalar>(x: [T; 3], a: f64, b: f64, alpha: f64) -> [T; 3] {
    let zero = T::cst(0.0);
    let r2 = x[0] * x[0] + x[1] * x[1];
    let k = r2.scale(a * a) - (x[2] * x[2]).scale(b * b);
    if k.re() <= 0.0 {
        return [zero; 3];
    }
    if b == 0.0 {
        return [zero, zero, k.powf(-alpha / 2.0)];
    }
    let radial = x[2] / r2 * k.powf(-alpha / 2.0).scale(b * b);
    let swirl = k.powf((1.0 - alpha) / 2.0).scale(b) / r2;
    let axial = k.powf(-alpha / 2.0).scale(a * a);
    [radial * x[0] + swirl * x[1], radial * x[1] - swirl * x[0], axial]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{geodesic_flow, irrotational_2d, irrotational_axisymmetric};

    #[test]
    fn catalog_matches_special() {
        for n in [1, 2, 3, -3, -4] {
            let f = HomogeneousField::catalog_axisymmetric(n).unwrap();
            for x in [[0.3, -0.7, 0.4], [1.2, 0.1, -0.9], [0.05, 0.02, 1.0]] {
                let (u, p) = f.evaluate(x).unwrap();
                let (v, q) = irrotational_axisymmetric(n, x).unwrap();
                let scale = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                for i in 0..3 {
                    assert!((u[i] - v[i]).abs() < 1e-12 * scale, "n={n} {u:?} {v:?}");
                }
                assert!((p - q).abs() < 1e-12 * q.abs().max(1e-300));
            }
        }
        for n in [-1, 1, 2, 3] {
            let f = HomogeneousField::catalog_2d(n).unwrap();
            let (u, _) = f.evaluate([0.4, -1.1, 7.0]).unwrap();
            let v = irrotational_2d(n, [0.4, -1.1]).unwrap();
            assert!((u[0] - v[0]).abs() < 1e-12 && (u[1] - v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_matches_special() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = HomogeneousField::geodesic(h, h, -2.0).unwrap();
        let (u, p) = f.evaluate([1.0, 0.0, 0.0]).unwrap();
        assert!((u[1] + 0.25).abs() < 1e-15 && (u[2] - 0.25).abs() < 1e-15 && p == 0.0);
        let x = [0.8, 0.3, -0.2];
        let v = geodesic_flow(x, h, h, -2.0).unwrap();
        let (u, _) = f.evaluate(x).unwrap();
        for i in 0..3 {
            assert!((u[i] - v[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn origin_handling() {
        let f = HomogeneousField::catalog_axisymmetric(-3).unwrap();
        assert_eq!(f.evaluate([0.0; 3]).unwrap(), ([0.0; 3], 0.0));
        let g = HomogeneousField::catalog_axisymmetric(1).unwrap();
        assert!(g.evaluate([0.0; 3]).is_err());
    }

    #[test]
    fn on_axis_is_axial() {
        let f = HomogeneousField::catalog_axisymmetric(1).unwrap();
        let (u, _) = f.evaluate([0.0, 0.0, 1.0]).unwrap();
        assert!(u[0] == 0.0 && u[1] == 0.0 && u[2] != 0.0);
    }
}
