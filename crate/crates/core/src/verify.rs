//! Residual suites for constructed fields: Euler momentum and continuity,
//! Grad–Shafranov, the sphere-restricted system, homogeneity, first
//! integrals, the Beltrami identity and a weak form across the axis.
//!
//! Relative residuals divide by a pointwise scale (`|u||∇u| + |∇p| + |u|²/ρ`
//! for the momentum balance) plus a `1e-300` floor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bvp::{Mode, ParamSet, ProfileW};
use crate::error::{Error, Result};
use crate::fields::{FieldKind, HomogeneousField};
use crate::jet::{grad_point, hess_point, Grad, Jet, Scalar};
use crate::special::gauss_legendre;
use crate::Vec3;

/// Pipeline tolerance for relative residuals.
pub const PIPELINE_TOL: f64 = 1e-6;
pub const FLOOR: f64 = 1e-300;
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub samples: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Normalization scale at the point of largest relative residual.
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(name: &str, tol: f64) -> ResidualReport {
        ResidualReport { name: name.into(), samples: 0, max_abs: 0.0, max_rel: 0.0, scale: 0.0, tol, pass: true }
    }

    pub fn push(&mut self, abs: f64, scale: f64) {
        let rel = abs / (scale + FLOOR);
        self.samples += 1;
        if !abs.is_finite() || !rel.is_finite() {
            self.max_abs = f64::NAN;
            self.max_rel = f64::NAN;
            self.pass = false;
            return;
        }
        self.max_abs = self.max_abs.max(abs);
        if rel > self.max_rel || self.samples == 1 {
            self.max_rel = self.max_rel.max(rel);
            self.scale = scale;
        }
        self.pass = self.pass && self.max_rel < self.tol;
    }

    pub fn line(&self) -> String {
        format!(
            "{:<28} n={:<4} abs={:.3e} rel={:.3e} tol={:.0e} {}",
            self.name,
            self.samples,
            self.max_abs,
            self.max_rel,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Fixed-seed points with `0.1 ≤ ρ ≤ 10` (log-uniform) and `r ≥ 10⁻³ρ`.
pub fn sample_points(seed: u64, n: usize) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let rho = 10f64.powf(rng.gen_range(-1.0..1.0));
        let t: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = (1.0 - t * t).sqrt();
        if s < 1e-3 {
            continue;
        }
        pts.push([rho * s * phi.cos(), rho * s * phi.sin(), rho * t]);
    }
    pts
}

/// Sample points inside the field's regular set.
pub fn sample_points_for(field: &HomogeneousField, seed: u64, n: usize) -> Vec<Vec3> {
    match field.kind {
        FieldKind::Geodesic { a, b } => {
            let mut out = Vec::with_capacity(n);
            let mut k = 0;
            while out.len() < n {
                for x in sample_points(seed.wrapping_add(k), n) {
                    let r2 = x[0] * x[0] + x[1] * x[1];
                    let rho2 = r2 + x[2] * x[2];
                    if a * a * r2 - b * b * x[2] * x[2] > 0.05 * rho2 && out.len() < n {
                        out.push(x);
                    }
                }
                k += 1;
            }
            out
        }
        _ => sample_points(seed, n),
    }
}

struct Local {
    u: [f64; 3],
    du: [[f64; 3]; 3],
    dp: [f64; 3],
    ud: [Grad; 3],
}

fn local(field: &HomogeneousField, x: Vec3) -> Local {
    let s = field.state(grad_point(x));
    let u = [s.u[0].v, s.u[1].v, s.u[2].v];
    let du = [s.u[0].d, s.u[1].d, s.u[2].d];
    Local { u, du, dp: s.p.d, ud: s.u }
}

fn advect(u: &[f64; 3], du: &[[f64; 3]; 3]) -> [f64; 3] {
    let mut a = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i] += u[j] * du[i][j];
        }
    }
    a
}

fn frob(du: &[[f64; 3]; 3]) -> f64 {
    du.iter().flat_map(|r| r.iter()).map(|x| x * x).sum::<f64>().sqrt()
}

/// Momentum and continuity residuals, plus the component split of the
/// axisymmetric (poloidal, swirl transport) or 2½D (planar, vertical) system.
pub fn euler_residual(field: &HomogeneousField, points: &[Vec3]) -> Vec<ResidualReport> {
    let mut mom = ResidualReport::new("euler.momentum", PIPELINE_TOL);
    let mut div = ResidualReport::new("euler.divergence", PIPELINE_TOL);
    let axi = field.is_axisymmetric();
    let (n1, n2) = if axi { ("euler.poloidal", "euler.swirl_transport") } else { ("euler.horizontal", "euler.vertical_transport") };
    let mut c1 = ResidualReport::new(n1, PIPELINE_TOL);
    let mut c2 = ResidualReport::new(n2, PIPELINE_TOL);
    for &x in points {
        let l = local(field, x);
        let adv = advect(&l.u, &l.du);
        let res: Vec<f64> = (0..3).map(|i| adv[i] + l.dp[i]).collect();
        let rho = norm(&x);
        let hom = norm(&l.u).powi(2) / rho;
        let scale = norm(&l.u) * frob(&l.du) + norm(&l.dp) + hom;
        mom.push(norm(&res), scale);
        div.push((l.du[0][0] + l.du[1][1] + l.du[2][2]).abs(), frob(&l.du) + norm(&l.u) / rho);
        if axi {
            let xg = grad_point(x);
            let r = (xg[0] * xg[0] + xg[1] * xg[1]).sqrt();
            let eph = [-xg[1] / r, xg[0] / r];
            let uphi = l.ud[0] * eph[0] + l.ud[1] * eph[1];
            let up = [l.ud[0] - uphi * eph[0], l.ud[1] - uphi * eph[1], l.ud[2]];
            let upv = [up[0].v, up[1].v, up[2].v];
            let dup = [up[0].d, up[1].d, up[2].d];
            let rv = r.v;
            let er = [x[0] / rv, x[1] / rv, 0.0];
            let adv = advect(&upv, &dup);
            let centripetal = uphi.v * uphi.v / rv;
            let res: Vec<f64> = (0..3).map(|i| adv[i] + l.dp[i] - centripetal * er[i]).collect();
            c1.push(norm(&res), norm(&upv) * frob(&dup) + norm(&l.dp) + centripetal + hom);
            let ur = upv[0] * er[0] + upv[1] * er[1];
            let tr: f64 = (0..3).map(|j| upv[j] * uphi.d[j]).sum::<f64>();
            let dphi = norm(&uphi.d);
            c2.push((tr + ur / rv * uphi.v).abs(), norm(&upv) * dphi + (ur * uphi.v / rv).abs() + norm(&l.u) * frob(&l.du) + hom);
        } else {
            let uh = [l.u[0], l.u[1], 0.0];
            let duh = [l.du[0], l.du[1], [0.0; 3]];
            let adv = advect(&uh, &duh);
            let res = [adv[0] + l.dp[0], adv[1] + l.dp[1]];
            c1.push(norm(&res), norm(&uh) * frob(&duh) + norm(&l.dp[..2]) + hom);
            let tr = uh[0] * l.du[2][0] + uh[1] * l.du[2][1];
            c2.push(tr.abs(), norm(&uh) * norm(&l.du[2]) + norm(&l.u) * frob(&l.du) + hom);
        }
    }
    vec![mom, div, c1, c2]
}

/// `-(1/r²)Lψ + Π′(ψ) - (1/r²)Γ′(ψ)Γ(ψ)` at half-plane points `(z, r)`, with
/// `Lψ = ρ^{-β-2}(β(β+1)w + (1-t²)w″)` from the profile's own derivatives.
pub fn grad_shafranov_residual(w: &ProfileW, params: &ParamSet, points: &[(f64, f64)]) -> Result<ResidualReport> {
    if params.mode != Mode::Axisymmetric {
        return Err(Error::Contract("Grad–Shafranov residual needs axisymmetric mode".into()));
    }
    let b = params.beta;
    let mut rep = ResidualReport::new("grad_shafranov", PIPELINE_TOL);
    for &(z, r) in points {
        let rho = z.hypot(r);
        let t = z / rho;
        let (wv, _, d2) = w.eval3(t);
        let k = rho.powf(-b - 2.0);
        let (l1, l2) = (k * b * (b + 1.0) * wv, k * (1.0 - t * t) * d2);
        let psi = wv * rho.powf(-b);
        let dpi = if params.big_c1 != 0.0 { params.big_c1 * (2.0 + 4.0 / b) * psi * psi.abs().powf(4.0 / b) } else { 0.0 };
        let gg = if params.big_c2 != 0.0 {
            params.big_c2 * params.big_c2 * (1.0 + 1.0 / b) * psi * psi.abs().powf(2.0 / b)
        } else {
            0.0
        };
        let terms = [-l1 / (r * r), -l2 / (r * r), dpi, -gg / (r * r)];
        rep.push(terms.iter().sum::<f64>().abs(), terms.iter().map(|x| x.abs()).sum());
    }
    Ok(rep)
}

/// Profiles of `ρ^α u = a e_θ + b e_φ + f e_ρ` and `ρ^{2α} p` on a θ-grid,
/// with their θ-derivatives.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereProfile {
    pub theta: Vec<f64>,
    pub a: Vec<f64>,
    pub da: Vec<f64>,
    pub b: Vec<f64>,
    pub db: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
}

type J1 = Jet<f64, 1>;

fn interior_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| std::f64::consts::PI * (i as f64 - 0.5) / n as f64).collect()
}

impl SphereProfile {
    fn from_fn(n: usize, mut g: impl FnMut(J1) -> [J1; 4]) -> SphereProfile {
        let theta = interior_grid(n);
        let mut sp = SphereProfile {
            theta: theta.clone(),
            a: vec![],
            da: vec![],
            b: vec![],
            db: vec![],
            f: vec![],
            df: vec![],
            p: vec![],
            dp: vec![],
        };
        for th in theta {
            let [a, b, f, p] = g(J1::var(th, 0));
            sp.a.push(a.v);
            sp.da.push(a.d[0]);
            sp.b.push(b.v);
            sp.db.push(b.d[0]);
            sp.f.push(f.v);
            sp.df.push(f.d[0]);
            sp.p.push(p.v);
            sp.dp.push(p.d[0]);
        }
        sp
    }

    /// Restriction of an axisymmetric field to the unit sphere.
    pub fn from_field(field: &HomogeneousField, n: usize) -> Result<SphereProfile> {
        if !field.is_axisymmetric() {
            return Err(Error::Contract("sphere restriction needs an axisymmetric field".into()));
        }
        Ok(Self::from_fn(n, |th| {
            let (s, c) = (th.sin(), th.cos());
            let st = field.state([s, J1::cst(0.0), c]);
            let a = st.u[0] * c - st.u[2] * s;
            let f = st.u[0] * s + st.u[2] * c;
            [a, st.u[1], f, st.p]
        }))
    }

    /// Zonal irrotational solution: `f = P_n(cosθ)` with `n(n+1) = (α-2)(α-1)`,
    /// `v = ∇f/(1-α)`, `p = -(|v|² + f²)/2`.
    pub fn irrotational(alpha: f64, n: usize) -> Result<SphereProfile> {
        if alpha.fract() != 0.0 || alpha == 1.0 {
            return Err(Error::Parameter(format!("integer α ≠ 1 required, got {alpha}")));
        }
        let deg = (alpha - 2.0).max(1.0 - alpha) as usize;
        Ok(Self::from_fn(n, |th| {
            let t = th.cos();
            let (mut p0, mut p1) = (J1::cst(1.0), t);
            let (mut q0, mut q1) = (J1::cst(0.0), J1::cst(1.0));
            if deg == 0 {
                p1 = p0;
                q1 = q0;
            }
            for k in 1..deg {
                let kf = k as f64;
                let p2 = (t * p1).scale((2.0 * kf + 1.0) / (kf + 1.0)) - p0.scale(kf / (kf + 1.0));
                let q2 = q0 + p1.scale(2.0 * kf + 1.0);
                p0 = p1;
                p1 = p2;
                q0 = q1;
                q1 = q2;
            }
            let f = p1;
            let a = (-th.sin() * q1).scale(1.0 / (1.0 - alpha));
            let p = (a * a + f * f).scale(-0.5);
            [a, J1::cst(0.0), f, p]
        }))
    }

    pub fn zero(n: usize) -> SphereProfile {
        Self::from_fn(n, |_| [J1::cst(0.0); 4])
    }
}

/// Residuals of the sphere system for axisymmetric profiles (`∂_φ ≡ 0`).
pub fn sphere_equations_residual(sp: &SphereProfile, alpha: f64) -> Vec<ResidualReport> {
    let names = ["sphere.momentum_theta", "sphere.momentum_phi", "sphere.radial", "sphere.continuity", "sphere.bernoulli"];
    let mut reps: Vec<ResidualReport> = names.iter().map(|n| ResidualReport::new(n, PIPELINE_TOL)).collect();
    for i in 0..sp.theta.len() {
        let (s, c) = sp.theta[i].sin_cos();
        let (a, da, b, db, f, df, p, dp) = (sp.a[i], sp.da[i], sp.b[i], sp.db[i], sp.f[i], sp.df[i], sp.p[i], sp.dp[i]);
        let omega = db + b * c / s;
        let dv2 = a * da + b * db;
        let eqs: [Vec<f64>; 5] = [
            vec![(1.0 - alpha) * f * a, -omega * b, dp + dv2],
            vec![(1.0 - alpha) * f * b, omega * a],
            vec![a * df, -(a * a + b * b), -alpha * f * f, -2.0 * alpha * p],
            vec![(2.0 - alpha) * f, da + a * c / s],
            {
                let pi = p + (a * a + b * b + f * f) / 2.0;
                let dpi = dp + dv2 + f * df;
                let parts = a.abs() * (dp.abs() + dv2.abs() + (f * df).abs())
                    + 2.0 * (alpha * f).abs() * (p.abs() + (a * a + b * b + f * f) / 2.0);
                vec![a * dpi, -2.0 * alpha * f * pi, 0.0 * parts, parts]
            },
        ];
        let u2 = a * a + b * b + f * f;
        for (k, (rep, terms)) in reps.iter_mut().zip(eqs.iter()).enumerate() {
            let parts: f64 = terms.iter().map(|x| x.abs()).sum();
            match k {
                4 => rep.push((terms[0] + terms[1]).abs(), terms[3]),
                3 => rep.push(terms.iter().sum::<f64>().abs(), parts + u2.sqrt()),
                _ => rep.push(terms.iter().sum::<f64>().abs(), parts + u2),
            }
        }
    }
    reps
}

/// `max |λ^α u(λx) - u(x)|` and `|λ^{2α} p(λx) - p(x)|`, relative.
pub fn homogeneity_check(field: &HomogeneousField, points: &[Vec3], lambdas: &[f64]) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new("homogeneity", PIPELINE_TOL);
    let al = field.alpha;
    for &x in points {
        let (u, p) = field.evaluate(x)?;
        let su = norm(&u);
        for &l in lambdas {
            let (v, q) = field.evaluate([l * x[0], l * x[1], l * x[2]])?;
            let k = l.powf(al);
            let du: Vec<f64> = (0..3).map(|i| k * v[i] - u[i]).collect();
            rep.push(norm(&du), su);
            rep.push((k * k * q - p).abs(), p.abs() + su * su);
        }
    }
    Ok(rep)
}

fn curl(ud: &[Grad; 3]) -> [f64; 3] {
    [ud[2].d[1] - ud[1].d[2], ud[0].d[2] - ud[2].d[0], ud[1].d[0] - ud[0].d[1]]
}

/// Transport residuals `u·∇Π`, `u·∇Γ` and, without swirl, `u·∇ζ` with
/// `ζ = ω^φ/r`.
pub fn first_integral_check(field: &HomogeneousField, points: &[Vec3]) -> Vec<ResidualReport> {
    let mut pi_r = ResidualReport::new("first_integral.bernoulli", PIPELINE_TOL);
    let mut ga_r = ResidualReport::new("first_integral.swirl", PIPELINE_TOL);
    let swirl = matches!(field.kind, FieldKind::Geodesic { b, .. } if b != 0.0);
    let zeta_applies = field.is_axisymmetric() && field.big_c2 == 0.0 && !swirl;
    let mut ze_r = ResidualReport::new("first_integral.zeta", PIPELINE_TOL);
    for &x in points {
        let s = field.state(grad_point(x));
        let u = [s.u[0].v, s.u[1].v, s.u[2].v];
        let su = norm(&u);
        let dot = |g: &[f64; 3]| (0..3).map(|i| u[i] * g[i]).sum::<f64>();
        pi_r.push(dot(&s.pi.d).abs(), su * norm(&s.pi.d));
        ga_r.push(dot(&s.gamma.d).abs(), su * norm(&s.gamma.d));
        if zeta_applies {
            let h = field.state(hess_point(x));
            let w = [
                h.u[2].d[1] - h.u[1].d[2],
                h.u[0].d[2] - h.u[2].d[0],
                h.u[1].d[0] - h.u[0].d[1],
            ];
            let xg = grad_point(x);
            let r2 = xg[0] * xg[0] + xg[1] * xg[1];
            let zeta = (w[1] * xg[0] - w[0] * xg[1]) / r2;
            let hn = h.u.iter().flat_map(|c| c.d.iter()).flat_map(|g| g.d.iter()).map(|x| x * x).sum::<f64>().sqrt();
            let gn = h.u.iter().flat_map(|c| c.d.iter()).map(|g| g.v * g.v).sum::<f64>().sqrt();
            let scale = su * (norm(&zeta.d) + hn / r2.v.sqrt() + gn / r2.v + su / (norm(&x) * r2.v));
            ze_r.push(dot(&zeta.d).abs(), scale);
        }
    }
    let mut out = vec![pi_r, ga_r];
    if zeta_applies {
        out.push(ze_r);
    }
    out
}

/// `‖∇×u - φ u‖ / ‖∇×u‖` for Beltrami fields.
pub fn beltrami_check(field: &HomogeneousField, points: &[Vec3]) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new("beltrami", PIPELINE_TOL);
    for &x in points {
        let l = local(field, x);
        let w = curl(&l.ud);
        let k = field.beltrami_factor(x)?;
        let d: Vec<f64> = (0..3).map(|i| w[i] - k * l.u[i]).collect();
        rep.push(norm(&d), norm(&w));
    }
    Ok(rep)
}

/// `ω^φ = ρ^{-α-1}((1-α)a - ∂_θ f)` for axisymmetric fields without swirl.
pub fn curl_consistency(field: &HomogeneousField, points: &[Vec3]) -> Result<ResidualReport> {
    if !field.is_axisymmetric() || field.big_c2 != 0.0 {
        return Err(Error::Contract("curl consistency needs an axisymmetric field without swirl".into()));
    }
    let mut rep = ResidualReport::new("curl.azimuthal", PIPELINE_TOL);
    for &x in points {
        let l = local(field, x);
        let w = curl(&l.ud);
        let r = x[0].hypot(x[1]);
        let rho = r.hypot(x[2]);
        let wphi = (-x[1] * w[0] + x[0] * w[1]) / r;
        let sp = SphereProfile::from_fn(1, |_| {
            let th = J1::var(r.atan2(x[2]), 0);
            let (s, c) = (th.sin(), th.cos());
            let st = field.state([s, J1::cst(0.0), c]);
            [st.u[0] * c - st.u[2] * s, st.u[1], st.u[0] * s + st.u[2] * c, st.p]
        });
        let al = field.alpha;
        let k = rho.powf(-al - 1.0);
        let pred = k * ((1.0 - al) * sp.a[0] - sp.df[0]);
        rep.push((wphi - pred).abs(), norm(&w) + k * ((1.0 - al) * sp.a[0]).abs() + k * sp.df[0].abs());
    }
    Ok(rep)
}

/// Weak momentum and continuity balances against compactly supported test
/// fields `η e_k` centred on the `z`-axis, `η = (1 - |x - x₀|²/R²)⁴`.
/// Integrates in spherical coordinates about `x₀` with geometric grading
/// toward the axis.
pub fn weak_form_check(field: &HomogeneousField, count: usize, seed: u64) -> Result<ResidualReport> {
    if !field.is_axisymmetric() {
        return Err(Error::Contract("weak form check needs an axisymmetric field".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new("weak_form", PIPELINE_TOL);
    let (gx, gw) = gauss_legendre(10);
    let mut th_nodes = Vec::new();
    let levels = 14;
    let half = std::f64::consts::FRAC_PI_2;
    let mut edges = vec![0.0];
    for k in (0..levels).rev() {
        edges.push(half * 0.5f64.powi(k as i32));
    }
    for e in edges.windows(2) {
        for (x, w) in gx.iter().zip(&gw) {
            let t = 0.5 * (e[0] + e[1]) + 0.5 * (e[1] - e[0]) * x;
            let wt = 0.5 * (e[1] - e[0]) * w;
            th_nodes.push((t, wt));
            th_nodes.push((std::f64::consts::PI - t, wt));
        }
    }
    let (rx, rw) = gauss_legendre(16);
    let nphi = 16;
    for _ in 0..count {
        let z0: f64 = rng.gen_range(0.5..2.0);
        let big_r: f64 = rng.gen_range(0.2..0.4);
        let comp = rng.gen_range(0..3usize);
        let mut acc = [0.0; 4];
        let mut mag = [0.0; 2];
        for (t, wt) in &th_nodes {
            let (st, ct) = t.sin_cos();
            for (xr, wr) in rx.iter().zip(&rw) {
                let rr = 0.5 * big_r * (1.0 + xr);
                let jr = 0.5 * big_r * wr * rr * rr * st * wt;
                for j in 0..nphi {
                    let ph = std::f64::consts::TAU * (j as f64 + 0.5) / nphi as f64;
                    let jac = jr * std::f64::consts::TAU / nphi as f64;
                    let d = [rr * st * ph.cos(), rr * st * ph.sin(), rr * ct];
                    let x = [d[0], d[1], z0 + d[2]];
                    let q = 1.0 - rr * rr / (big_r * big_r);
                    let grad_eta: Vec<f64> = d.iter().map(|di| -8.0 * q.powi(3) * di / (big_r * big_r)).collect();
                    let (u, p) = field.evaluate(x)?;
                    let ug: f64 = (0..3).map(|i| u[i] * grad_eta[i]).sum();
                    acc[comp] += jac * (u[comp] * ug + p * grad_eta[comp]);
                    acc[3] += jac * ug;
                    mag[0] += jac * (u[comp].abs() * ug.abs() + (p * grad_eta[comp]).abs());
                    mag[1] += jac * norm(&u) * norm(&grad_eta);
                }
            }
        }
        rep.push(acc[comp].abs(), mag[0]);
        rep.push(acc[3].abs(), mag[1]);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Euler,
    Gs,
    Sphere,
    Homog,
    Integrals,
    Beltrami,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Euler, Check::Gs, Check::Sphere, Check::Homog, Check::Integrals, Check::Beltrami];

    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "all" => out.extend(Check::ALL),
                "euler" => out.push(Check::Euler),
                "gs" => out.push(Check::Gs),
                "sphere" => out.push(Check::Sphere),
                "homog" => out.push(Check::Homog),
                "integrals" => out.push(Check::Integrals),
                "beltrami" => out.push(Check::Beltrami),
                other => return Err(Error::Parameter(format!("unknown check '{other}'"))),
            }
        }
        Ok(out)
    }
}

/// Run the requested checks that apply to `field`.
pub fn run_checks(field: &HomogeneousField, checks: &[Check], n: usize, seed: u64) -> Result<Vec<ResidualReport>> {
    let pts = sample_points_for(field, seed, n);
    let mut out = Vec::new();
    for c in checks {
        match c {
            Check::Euler => out.extend(euler_residual(field, &pts)),
            Check::Gs => {
                if let (FieldKind::Axisymmetric(w), true) = (&field.kind, field.mode != crate::fields::FieldMode::Catalog) {
                    let zr: Vec<(f64, f64)> = pts.iter().map(|x| (x[2], x[0].hypot(x[1]))).collect();
                    out.push(grad_shafranov_residual(w, &w.params, &zr)?);
                }
            }
            Check::Sphere => {
                if field.is_axisymmetric() {
                    let sp = SphereProfile::from_field(field, 200)?;
                    out.extend(sphere_equations_residual(&sp, field.alpha));
                }
            }
            Check::Homog => out.push(homogeneity_check(field, &pts, &[1e-3, 2.0, 1e3])?),
            Check::Integrals => out.extend(first_integral_check(field, &pts)),
            Check::Beltrami => {
                if field.profile().is_some() && field.big_c1 == 0.0 && field.big_c2 != 0.0 {
                    out.push(beltrami_check(field, &pts)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_exact() {
        let pts = sample_points(7, 60);
        for n in [1, 2, 3, 0, -2, -3] {
            let f = HomogeneousField::catalog_axisymmetric(n).unwrap();
            for r in euler_residual(&f, &pts) {
                assert!(r.max_rel < 1e-9, "n={n} {}", r.line());
            }
            for r in first_integral_check(&f, &pts) {
                assert!(r.max_rel < 1e-9, "n={n} {}", r.line());
            }
        }
    }

    #[test]
    fn sphere_oracles() {
        for al in [3.0, 4.0, 0.0, -1.0, -2.0] {
            let sp = SphereProfile::irrotational(al, 100).unwrap();
            for r in sphere_equations_residual(&sp, al) {
                assert!(r.max_rel < 1e-8, "α={al} {}", r.line());
            }
        }
        for r in sphere_equations_residual(&SphereProfile::zero(10), 3.0) {
            assert_eq!(r.max_abs, 0.0);
        }
    }

    #[test]
    fn sphere_restriction_of_catalog() {
        for n in [1, 2, -3] {
            let f = HomogeneousField::catalog_axisymmetric(n).unwrap();
            let sp = SphereProfile::from_field(&f, 80).unwrap();
            for r in sphere_equations_residual(&sp, f.alpha) {
                assert!(r.max_rel < 1e-9, "{}", r.line());
            }
        }
    }

    #[test]
    fn report_flags() {
        let mut r = ResidualReport::new("x", 1e-6);
        r.push(1e-8, 1.0);
        assert!(r.pass);
        r.push(1.0, 1.0);
        assert!(!r.pass);
        r.push(0.0, 0.0);
        assert_eq!(r.samples, 3);
    }
}
