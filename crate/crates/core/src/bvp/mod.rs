//! One-dimensional Dirichlet problems for the angular profile `w`.
//!
//! Nonautonomous problem on `(-1, 1)`:
//! `w'' + β(β+1)w/(1-t²) + c₁w|w|^{4/β} + c₂w|w|^{2/β}/(1-t²) = 0`.
//! Autonomous problem on `(0, π)`: `w'' + β²w + c w|w|^{2/β} = 0`.

pub mod autonomous;
pub mod collocation;
pub mod mdc;
pub mod series;

use serde::{Deserialize, Serialize};

use crate::cheb::{cgl_nodes, Cheb};
use crate::error::{Error, Result};
use crate::special::{composite_gauss, gauss_legendre, w_profile, PolyProfile};
use mdc::{patch_radius, Mdc, Piecewise};
use series::{LocalProblem, Series};

pub use autonomous::{time_map, time_map_amplitude, shooting_amplitude};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `β = α - 2`, profile on `(-1, 1)`.
    Axisymmetric,
    /// 2½D, `β = α - 1`, profile on `(0, π)`.
    Planar,
}

/// Constants of a homogeneous solution. In planar mode `c2` holds `c` and `c1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub mode: Mode,
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
}

impl ParamSet {
    /// From the field constants `(α, C₁, C₂)` in axisymmetric mode.
    pub fn axisymmetric(alpha: f64, big_c1: f64, big_c2: f64) -> Result<ParamSet> {
        let beta = alpha - 2.0;
        check_axisymmetric_beta(beta, alpha)?;
        if big_c1 > 0.0 {
            return Err(Error::Parameter(format!("C₁ ≤ 0 required, got C₁ = {big_c1}")));
        }
        if (-4.0..-2.0).contains(&beta) && big_c1 != 0.0 {
            return Err(Error::Parameter(format!("C₁ = 0 required for −2 ≤ α < 0 (α = {alpha})")));
        }
        let c1 = -2.0 * big_c1 * (1.0 + 2.0 / beta);
        let c2 = big_c2 * big_c2 * (1.0 + 1.0 / beta);
        if c1 == 0.0 && c2 == 0.0 {
            return Err(Error::Parameter(
                "C₁ = C₂ = 0 gives c₁ = c₂ = 0; request the linear branch explicitly".into(),
            ));
        }
        Ok(ParamSet { mode: Mode::Axisymmetric, alpha, beta, c1: c1.abs(), c2, big_c1, big_c2 })
    }

    /// From the equation coefficients `(β, c₁, c₂)`; `C₂ ≥ 0` is chosen.
    pub fn axisymmetric_c(beta: f64, c1: f64, c2: f64) -> Result<ParamSet> {
        let alpha = beta + 2.0;
        check_axisymmetric_beta(beta, alpha)?;
        if c1 < 0.0 || c2 < 0.0 {
            return Err(Error::Parameter(format!("c₁, c₂ ≥ 0 required, got ({c1}, {c2})")));
        }
        if (-4.0..-2.0).contains(&beta) && c1 != 0.0 {
            return Err(Error::Parameter(format!("c₁ = 0 required for −4 ≤ β < −2 (β = {beta})")));
        }
        if c1 == 0.0 && c2 == 0.0 {
            return Err(Error::Parameter("c₁ = c₂ = 0: request the linear branch explicitly".into()));
        }
        let big_c1 = -c1 / (2.0 * (1.0 + 2.0 / beta));
        let big_c2 = (c2 / (1.0 + 1.0 / beta)).sqrt();
        Ok(ParamSet { mode: Mode::Axisymmetric, alpha, beta, c1, c2, big_c1: big_c1 + 0.0, big_c2 })
    }

    /// The linear branch `c₁ = c₂ = 0`.
    pub fn linear(beta: f64) -> Result<ParamSet> {
        if beta.is_nan() || (beta > -2.0 && beta <= 0.0) {
            return Err(Error::Parameter(format!("linear branch needs β ∉ (−2, 0], got β = {beta}")));
        }
        Ok(ParamSet { mode: Mode::Axisymmetric, alpha: beta + 2.0, beta, c1: 0.0, c2: 0.0, big_c1: 0.0, big_c2: 0.0 })
    }

    /// From `(α, C₁, C₂)` in 2½D mode.
    pub fn planar(alpha: f64, big_c1: f64, big_c2: f64) -> Result<ParamSet> {
        let beta = alpha - 1.0;
        if !alpha.is_finite() || (-1.0..=1.0).contains(&alpha) {
            return Err(Error::Parameter(format!(
                "2½D mode excludes −1 ≤ α ≤ 1 (no rotational solutions), got α = {alpha}"
            )));
        }
        let k = -2.0 * big_c1 + big_c2 * big_c2;
        if !(k > 0.0) {
            return Err(Error::Parameter(format!("−2C₁ + C₂² > 0 required, got {k}")));
        }
        let c = k * (1.0 + 1.0 / beta);
        Ok(ParamSet { mode: Mode::Planar, alpha, beta, c1: 0.0, c2: c, big_c1, big_c2 })
    }

    /// From `(β, c)` in 2½D mode, with `C₁ = 0`.
    pub fn planar_c(beta: f64, c: f64) -> Result<ParamSet> {
        if !(c > 0.0) {
            return Err(Error::Parameter(format!("c > 0 required, got c = {c}")));
        }
        let big_c2 = (c / (1.0 + 1.0 / beta)).sqrt();
        let mut p = ParamSet::planar(beta + 1.0, 0.0, big_c2)?;
        p.c2 = c;
        Ok(p)
    }

    /// The planar linear branch `c = 0` with integer `β ≠ 0`.
    pub fn planar_linear(beta: f64) -> Result<ParamSet> {
        if beta == 0.0 || beta.fract() != 0.0 {
            return Err(Error::Parameter(format!("planar linear branch needs a nonzero integer β, got {beta}")));
        }
        Ok(ParamSet { mode: Mode::Planar, alpha: beta + 1.0, beta, c1: 0.0, c2: 0.0, big_c1: 0.0, big_c2: 0.0 })
    }

    pub fn is_linear(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0
    }

    /// Coefficient of `w` (`β(β+1)` or `β²`).
    pub fn gamma(&self) -> f64 {
        match self.mode {
            Mode::Axisymmetric => self.beta * (self.beta + 1.0),
            Mode::Planar => self.beta * self.beta,
        }
    }

    pub(crate) fn local_problem(&self) -> LocalProblem {
        LocalProblem {
            gamma: self.gamma(),
            c1: self.c1,
            c2: self.c2,
            p1: 4.0 / self.beta,
            p2: 2.0 / self.beta,
            autonomous: self.mode == Mode::Planar,
        }
    }

    pub fn domain(&self) -> Domain {
        match self.mode {
            Mode::Axisymmetric => Domain::Interval,
            Mode::Planar => Domain::Angle,
        }
    }
}

fn check_axisymmetric_beta(beta: f64, alpha: f64) -> Result<()> {
    if !beta.is_finite() || (-2.0..=0.0).contains(&beta) {
        return Err(Error::Parameter(format!(
            "α ∈ [0,2] is excluded (no nontrivial axisymmetric solutions), got α = {alpha}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// `t ∈ (-1, 1)`.
    Interval,
    /// `φ ∈ (0, π)`.
    Angle,
}

impl Domain {
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Domain::Interval => (-1.0, 1.0),
            Domain::Angle => (0.0, std::f64::consts::PI),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    /// Polynomial `w` and, when exact, `q = w/(1 - t²)`.
    Poly { w: PolyProfile, q: Option<PolyProfile> },
    /// `(1 - t²) q(t)`.
    Factored { q: Cheb, dq: Cheb, d2q: Cheb },
    Piecewise(Piecewise),
    /// `sin(kφ)`.
    Sine(f64),
    /// Arch on `[0, len]` repeated `lobes` times with alternating sign.
    Arch { arch: Piecewise, len: f64, lobes: usize },
    Combo(Vec<(f64, ProfileW)>),
    /// Quintic Hermite interpolant of tabulated `(x, w, w', w'')`.
    Table { x: Vec<f64>, w: Vec<f64>, d1: Vec<f64>, d2: Vec<f64> },
}

impl Repr {
    pub fn poly(w: PolyProfile) -> Repr {
        let q = w.div_one_minus_t2();
        Repr::Poly { w, q }
    }
}

/// A one-dimensional profile with its residual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileW {
    pub domain: Domain,
    pub params: ParamSet,
    pub repr: Repr,
    /// Multiplier applied to the representation.
    pub scale: f64,
    /// Evaluate at the mirror point (`-t` or `π - φ`).
    pub reflect: bool,
    /// Max residual of the governing ODE on the certification grid.
    pub residual_certificate: f64,
    /// Same on a 4× finer independent grid.
    pub refined_residual: f64,
    pub zero_count: usize,
}

impl ProfileW {
    /// Wraps a representation and computes its certificates and zero count.
    pub fn new(params: ParamSet, repr: Repr) -> ProfileW {
        let mut p = ProfileW {
            domain: params.domain(),
            params,
            repr,
            scale: 1.0,
            reflect: false,
            residual_certificate: 0.0,
            refined_residual: 0.0,
            zero_count: 0,
        };
        p.recertify();
        p
    }

    fn recertify(&mut self) {
        self.residual_certificate = residual_ode(self);
        self.refined_residual = refined_residual(self);
        self.zero_count = self.zeros().len();
    }

    /// Catalog polynomial `w_{n+1}` as a linear-branch profile.
    pub fn catalog(n: i64) -> Result<ProfileW> {
        let w = w_profile(n)?;
        Ok(ProfileW::new(ParamSet::linear(n as f64)?, Repr::poly(w)))
    }

    /// `sin(βφ)` on `(0, π)` for integer `β`.
    pub fn sine(beta: f64) -> Result<ProfileW> {
        Ok(ProfileW::new(ParamSet::planar_linear(beta)?, Repr::Sine(beta)))
    }

    /// A polynomial profile with arbitrary parameters.
    pub fn from_poly(params: ParamSet, w: PolyProfile) -> ProfileW {
        ProfileW::new(params, Repr::poly(w))
    }

    /// `(1 - t²) q(t)` from the values of `q` at `m + 1` CGL nodes on `[-1, 1]`.
    pub fn factored(params: ParamSet, q_values: &[f64]) -> ProfileW {
        let q = Cheb::from_cgl_values(-1.0, 1.0, q_values);
        let dq = q.derivative();
        let d2q = dq.derivative();
        ProfileW::new(params, Repr::Factored { q, dq, d2q })
    }

    /// `Σ aᵢ wᵢ`; parameters taken from the first term.
    pub fn combination(terms: Vec<(f64, ProfileW)>) -> Result<ProfileW> {
        let first = terms.first().ok_or_else(|| Error::Contract("empty combination".into()))?;
        let params = first.1.params;
        if terms.iter().any(|(_, p)| p.domain != first.1.domain) {
            return Err(Error::Contract("combination of profiles on different domains".into()));
        }
        Ok(ProfileW::new(params, Repr::Combo(terms)))
    }

    /// Tabulated profile on ascending nodes covering the domain.
    pub fn from_table(params: ParamSet, x: Vec<f64>, w: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Result<ProfileW> {
        let n = x.len();
        if n < 2 || w.len() != n || d1.len() != n || d2.len() != n {
            return Err(Error::Contract("table columns must have equal length ≥ 2".into()));
        }
        if x.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::Contract("table nodes must be strictly ascending".into()));
        }
        let (a, b) = params.domain().bounds();
        if (x[0] - a).abs() > 1e-12 || (x[n - 1] - b).abs() > 1e-12 {
            return Err(Error::Contract(format!("table must span [{a}, {b}]")));
        }
        Ok(ProfileW::new(params, Repr::Table { x, w, d1, d2 }))
    }

    pub fn zero(params: ParamSet) -> ProfileW {
        let mut p = ProfileW::new(params, Repr::Sine(1.0));
        p.scale = 0.0;
        p.recertify();
        p
    }

    fn base3(&self, x: f64) -> (f64, f64, f64) {
        match &self.repr {
            Repr::Poly { w, .. } => w.eval3(x),
            Repr::Factored { q, dq, d2q } => {
                let (qv, d1, d2) = (q.eval(x), dq.eval(x), d2q.eval(x));
                let o = (1.0 - x) * (1.0 + x);
                (o * qv, -2.0 * x * qv + o * d1, -2.0 * qv - 4.0 * x * d1 + o * d2)
            }
            Repr::Piecewise(pw) => pw.eval3(x),
            Repr::Sine(k) => {
                let (s, c) = (k * x).sin_cos();
                (s, k * c, -k * k * s)
            }
            Repr::Arch { arch, len, lobes } => {
                let k = ((x / len).floor().max(0.0) as usize).min(lobes - 1);
                let y = x - k as f64 * len;
                let sg = if k % 2 == 0 { 1.0 } else { -1.0 };
                let (w, d1, d2) = arch.eval3(y.clamp(0.0, *len));
                (sg * w, sg * d1, sg * d2)
            }
            Repr::Combo(terms) => terms.iter().fold((0.0, 0.0, 0.0), |acc, (a, p)| {
                let (w, d1, d2) = p.eval3(x);
                (acc.0 + a * w, acc.1 + a * d1, acc.2 + a * d2)
            }),
            Repr::Table { x: xs, w, d1, d2 } => {
                let n = xs.len();
                let i = xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
                hermite5(xs[i + 1] - xs[i], [w[i], d1[i], d2[i]], [w[i + 1], d1[i + 1], d2[i + 1]], (x - xs[i]) / (xs[i + 1] - xs[i]))
            }
        }
    }

    /// `(w, w', w'')` at `x` in the profile's domain.
    pub fn eval3(&self, x: f64) -> (f64, f64, f64) {
        let (w, d1, d2) = if self.reflect {
            let (a, b) = self.domain.bounds();
            let (w, d1, d2) = self.base3(a + b - x);
            (w, -d1, d2)
        } else {
            self.base3(x)
        };
        (self.scale * w, self.scale * d1, self.scale * d2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval3(x).0
    }

    fn base_chi(&self, theta: f64) -> (f64, f64) {
        let (sn, cs) = theta.sin_cos();
        match &self.repr {
            Repr::Poly { w, q } => {
                match q {
                    Some(q) => {
                        let (v, d, _) = q.eval3(cs);
                        (v, -sn * d)
                    }
                    None => chi_direct(w.eval3(cs), theta),
                }
            }
            Repr::Factored { q, dq, .. } => (q.eval(cs), -sn * dq.eval(cs)),
            Repr::Piecewise(pw) => {
                let t = cs;
                let (lo, hi) = (pw.patch[0], *pw.patch.last().unwrap());
                if t >= hi.0 && theta <= std::f64::consts::FRAC_PI_2 {
                    let s = 2.0 * (theta / 2.0).sin().powi(2);
                    let (f, df) = series_chi(pw.endpoint_series(true), s);
                    (f, df * sn)
                } else if t <= lo.1 && theta > std::f64::consts::FRAC_PI_2 {
                    let s = 2.0 * ((std::f64::consts::PI - theta) / 2.0).sin().powi(2);
                    let (f, df) = series_chi(pw.endpoint_series(false), s);
                    (f, -df * sn)
                } else {
                    chi_direct(pw.eval3(t), theta)
                }
            }
            Repr::Combo(terms) => terms.iter().fold((0.0, 0.0), |acc, (a, p)| {
                let (c, d) = p.chi(theta);
                (acc.0 + a * c, acc.1 + a * d)
            }),
            _ => chi_direct(self.base3(cs), theta),
        }
    }

    /// `χ(θ) = w(cosθ)/sin²θ` and `χ'(θ)`, with exact pole limits.
    pub fn chi(&self, theta: f64) -> (f64, f64) {
        let (c, d) = if self.reflect {
            let (c, d) = self.base_chi(std::f64::consts::PI - theta);
            (c, -d)
        } else {
            self.base_chi(theta)
        };
        (self.scale * c, self.scale * d)
    }

    /// `w/(1 - t²)` when the representation carries the factor exactly.
    pub fn ratio(&self, x: f64) -> Option<f64> {
        if self.domain != Domain::Interval {
            return None;
        }
        let y = if self.reflect { -x } else { x };
        let q = match &self.repr {
            Repr::Poly { q, .. } => q.as_ref()?.eval(y),
            Repr::Factored { q, .. } => q.eval(y),
            _ => return None,
        };
        Some(self.scale * q)
    }

    /// `λ w` with the coefficients that keep it a solution: `(c₁λ^{-4/β}, c₂λ^{-2/β})`.
    pub fn scaled(&self, lambda: f64) -> Result<ProfileW> {
        let mut p = self.clone();
        p.scale *= lambda;
        let b = self.params.beta;
        if !self.params.is_linear() {
            let l = lambda.abs();
            p.params.c1 = self.params.c1 * l.powf(-4.0 / b);
            p.params.c2 = self.params.c2 * l.powf(-2.0 / b);
            p.params.big_c1 = self.params.big_c1 * l.powf(-4.0 / b);
            p.params.big_c2 = self.params.big_c2 * l.powf(-1.0 / b);
        }
        p.recertify();
        Ok(p)
    }

    pub fn negated(&self) -> ProfileW {
        let mut p = self.clone();
        p.scale = -p.scale;
        p.recertify();
        p
    }

    /// `t ↦ -t` (or `φ ↦ π - φ`).
    pub fn reflected(&self) -> ProfileW {
        let mut p = self.clone();
        p.reflect = !p.reflect;
        p.recertify();
        p
    }

    /// Same profile, re-certified against other parameters.
    pub fn with_params(&self, params: ParamSet) -> ProfileW {
        let mut p = self.clone();
        p.params = params;
        p.domain = params.domain();
        p.recertify();
        p
    }

    /// Interior sign changes, ascending.
    pub fn zeros(&self) -> Vec<f64> {
        if self.scale == 0.0 {
            return Vec::new();
        }
        let mirror = |z: f64| {
            let (a, b) = self.domain.bounds();
            if self.reflect {
                a + b - z
            } else {
                z
            }
        };
        let mut z: Vec<f64> = match &self.repr {
            Repr::Piecewise(pw) => pw.points[1..pw.points.len() - 1].iter().map(|&z| mirror(z)).collect(),
            Repr::Arch { len, lobes, .. } => (1..*lobes).map(|k| mirror(k as f64 * len)).collect(),
            Repr::Sine(k) => {
                let n = k.abs().round() as usize;
                (1..n).map(|j| j as f64 * std::f64::consts::PI / n as f64).collect()
            }
            _ => scan_zeros(|x| self.eval(x), self.domain.bounds()),
        };
        z.sort_by(|a, b| a.partial_cmp(b).unwrap());
        z
    }

    /// `(x, w, w')` on `n` uniform points including the ends.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let (a, b) = self.domain.bounds();
        (0..n)
            .map(|i| {
                let x = a + (b - a) * i as f64 / (n - 1) as f64;
                let (w, d, _) = self.eval3(x);
                (x, w, d)
            })
            .collect()
    }

    /// Largest `|w|` on a dense grid.
    pub fn max_abs(&self) -> f64 {
        self.samples(2001).iter().fold(0.0f64, |m, s| m.max(s.1.abs()))
    }

    /// Boundary values `(w(a), w(b))`.
    pub fn boundary_values(&self) -> (f64, f64) {
        let (a, b) = self.domain.bounds();
        (self.eval(a), self.eval(b))
    }
}

/// Quintic Hermite interpolation on `[0, 1]` of an interval of length `h`.
fn hermite5(h: f64, l: [f64; 3], r: [f64; 3], u: f64) -> (f64, f64, f64) {
    let a = [l[0], h * l[1], h * h * l[2] / 2.0];
    let big_a = r[0] - a[0] - a[1] - a[2];
    let big_b = h * r[1] - a[1] - 2.0 * a[2];
    let big_c = h * h * r[2] - 2.0 * a[2];
    let c = [
        a[0],
        a[1],
        a[2],
        10.0 * big_a - 4.0 * big_b + big_c / 2.0,
        -15.0 * big_a + 7.0 * big_b - big_c,
        6.0 * big_a - 3.0 * big_b + big_c / 2.0,
    ];
    let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
    for k in (0..6).rev() {
        dd = dd * u + 2.0 * d;
        d = d * u + v;
        v = v * u + c[k];
    }
    (v, d / h, dd / (h * h))
}

fn chi_direct((w, dw, _): (f64, f64, f64), theta: f64) -> (f64, f64) {
    let (sn, cs) = theta.sin_cos();
    let s2 = sn * sn;
    (w / s2, -dw / sn - 2.0 * w * cs / (s2 * sn))
}

/// `F(s)/(s(2-s))` and its `s`-derivative for an endpoint series `F`.
fn series_chi(ser: &Series, s: f64) -> (f64, f64) {
    let (mut f1, mut df1) = (0.0, 0.0);
    for (e, c) in ser.terms() {
        if e == 1.0 {
            f1 += c;
        } else {
            f1 += c * s.powf(e - 1.0);
            df1 += c * (e - 1.0) * s.powf(e - 2.0);
        }
    }
    let d = 2.0 - s;
    (f1 / d, df1 / d + f1 / (d * d))
}

fn scan_zeros(f: impl Fn(f64) -> f64, (a, b): (f64, f64)) -> Vec<f64> {
    let n = 4000;
    let margin = 1e-9 * (b - a);
    let mut zs = Vec::new();
    let mut xl = a + margin;
    let mut fl = f(xl);
    let scale = (0..=200).map(|i| f(a + (b - a) * i as f64 / 200.0).abs()).fold(0.0f64, f64::max);
    let small = 1e-12 * scale;
    for i in 1..=n {
        let xr = if i == n { b - margin } else { a + (b - a) * i as f64 / n as f64 };
        let fr = f(xr);
        if fl.abs() > small && fr.abs() > small && fl * fr < 0.0 {
            let (mut lo, mut hi, mut flo) = (xl, xr, fl);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zs.push(0.5 * (lo + hi));
        }
        if fr.abs() > small {
            xl = xr;
            fl = fr;
        }
    }
    zs
}

/// Pointwise residual of the governing ODE.
pub fn residual_point(params: &ParamSet, x: f64, w: f64, d2: f64) -> f64 {
    let lp = params.local_problem();
    let o = match params.mode {
        Mode::Planar => 1.0,
        Mode::Axisymmetric => (1.0 - x) * (1.0 + x),
    };
    if w == 0.0 {
        return d2.abs();
    }
    (d2 + lp.f(o, w)).abs()
}

fn gauss_points(domain: Domain, n: usize) -> Vec<f64> {
    let (a, b) = domain.bounds();
    let (x, _) = gauss_legendre(n);
    x.iter().map(|y| a + (y + 1.0) * (b - a) / 2.0).collect()
}

fn certification_points(w: &ProfileW, refine: usize) -> Vec<f64> {
    let mirror = |x: f64| {
        let (a, b) = w.domain.bounds();
        if w.reflect {
            a + b - x
        } else {
            x
        }
    };
    match &w.repr {
        Repr::Piecewise(pw) => pw.sample_points(mdc::SEGMENT_ORDER * refine).into_iter().map(mirror).collect(),
        Repr::Arch { arch, len, lobes } => {
            let base = arch.sample_points(mdc::SEGMENT_ORDER * refine);
            let mut v = Vec::new();
            for k in 0..*lobes {
                v.extend(base.iter().map(|x| mirror(x + k as f64 * len)));
            }
            v
        }
        _ => gauss_points(w.domain, 64 * refine),
    }
}

fn residual_on(w: &ProfileW, pts: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    let p = &w.params;
    for &x in pts {
        let (v, _, d2) = w.eval3(x);
        let r = match w.ratio(x) {
            Some(q) => {
                let av = v.abs();
                let mut r = d2 + p.gamma() * q;
                if p.c1 != 0.0 {
                    r += p.c1 * v * av.powf(4.0 / p.beta);
                }
                if p.c2 != 0.0 && av > 0.0 {
                    r += p.c2 * q * av.powf(2.0 / p.beta);
                }
                r.abs()
            }
            None => residual_point(p, x, v, d2),
        };
        worst = worst.max(r);
    }
    worst
}

/// Max residual of the governing ODE at the profile's interior certification nodes.
pub fn residual_ode(w: &ProfileW) -> f64 {
    residual_on(w, &certification_points(w, 1))
}

/// Residual on an independent grid four times finer.
pub fn refined_residual(w: &ProfileW) -> f64 {
    residual_on(w, &certification_points(w, 4))
}

/// The variational functional `I[w]`.
pub fn functional_i(w: &ProfileW) -> f64 {
    let p = &w.params;
    let b = p.beta;
    match w.domain {
        Domain::Interval => {
            // t = cosθ, dt = sinθ dθ
            let (th, wt) = composite_gauss(0.0, std::f64::consts::PI, 16, 64);
            let gamma = p.gamma();
            let mut total = 0.0;
            for (&t, &q) in th.iter().zip(&wt) {
                let (sn, cs) = t.sin_cos();
                let (v, d, _) = w.eval3(cs);
                let (chi, _) = w.chi(t);
                let av = v.abs();
                let mut f = 0.5 * (d * d * sn - gamma * chi * chi * sn.powi(3));
                if p.c1 != 0.0 {
                    f -= p.c1 * b / (2.0 * (b + 2.0)) * av.powf(2.0 + 4.0 / b) * sn;
                }
                if p.c2 != 0.0 && av > 0.0 {
                    f -= p.c2 * b / (2.0 * (b + 1.0)) * av.powf(2.0 + 2.0 / b) / sn;
                }
                total += q * f;
            }
            total
        }
        Domain::Angle => {
            let (xs, ws) = composite_gauss(0.0, std::f64::consts::PI, 16, 64);
            let mut total = 0.0;
            for (&x, &q) in xs.iter().zip(&ws) {
                let (v, d, _) = w.eval3(x);
                let mut f = 0.5 * (d * d - b * b * v * v);
                if p.c2 != 0.0 {
                    f -= p.c2 * b / (2.0 * (b + 1.0)) * v.abs().powf(2.0 + 2.0 / b);
                }
                total += q * f;
            }
            total
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Default,
    /// Interior-positive solution, only for `0 < β < 1`.
    Positive,
}

#[derive(Debug, Clone)]
pub enum Seed {
    /// Continuation from the nearest catalog profile.
    Auto,
    /// A starting profile on the same domain.
    Profile(Box<ProfileW>),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub branch: Branch,
    pub seed: Seed,
    /// Nodes of the global continuation grid.
    pub global_nodes: usize,
    pub continuation_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-8, branch: Branch::Default, seed: Seed::Auto, global_nodes: 64, continuation_steps: 20 }
    }
}

fn linear_solution(params: &ParamSet) -> Result<ProfileW> {
    let b = params.beta;
    if b.fract() != 0.0 {
        return Err(Error::NoSolution(format!("the linear branch has a solution only for integer β, got {b}")));
    }
    let n = if b > 0.0 { b as i64 } else { -1 - b as i64 };
    let w = w_profile(n)?;
    Ok(ProfileW::new(*params, Repr::poly(w)))
}

/// Solves the nonautonomous problem: global continuation, then multi-domain
/// collocation with series patches at the endpoints and zeros.
pub fn solve_nonautonomous(params: &ParamSet, opts: &SolveOptions) -> Result<ProfileW> {
    if params.mode != Mode::Axisymmetric {
        return Err(Error::Parameter("solve_nonautonomous needs axisymmetric-mode parameters".into()));
    }
    let b = params.beta;
    if opts.branch == Branch::Positive && !(b > 0.0 && b < 1.0) {
        return Err(Error::Parameter(format!("positive branch requires 0 < β < 1, got β = {b}")));
    }
    if params.is_linear() {
        return linear_solution(params);
    }
    let lp = params.local_problem();
    let global = match &opts.seed {
        Seed::Auto => collocation::global_solve(&lp, opts.global_nodes, opts.continuation_steps)?,
        Seed::Profile(p) => {
            let m = opts.global_nodes;
            let vals: Vec<f64> = cgl_nodes(m).iter().map(|&x| p.eval(x)).collect();
            Cheb::from_cgl_values(-1.0, 1.0, &vals)
        }
    };
    let mut zeros = collocation::interior_zeros(&global, 1e-3);
    if opts.branch == Branch::Positive {
        zeros.clear();
    }
    let dg = global.derivative();
    let mut points = vec![-1.0];
    points.extend(zeros.iter().copied());
    points.push(1.0);
    let slopes: Vec<f64> = points.iter().map(|&z| dg.eval(z)).collect();
    let pw = refine_piecewise(&lp, &points, &slopes, |x| global.eval(x))?;
    let profile = ProfileW::new(*params, Repr::Piecewise(pw));
    finish(profile, opts)
}

fn finish(profile: ProfileW, opts: &SolveOptions) -> Result<ProfileW> {
    if !(profile.residual_certificate < opts.tol) {
        return Err(Error::NoConvergence {
            msg: format!("certified residual above tolerance {:.1e}", opts.tol),
            best_residual: profile.residual_certificate,
        });
    }
    if opts.branch == Branch::Positive {
        let check = positivity_check(&profile);
        if let Err(e) = check {
            return Err(Error::NoConvergence { msg: e.to_string(), best_residual: profile.residual_certificate });
        }
    }
    Ok(profile)
}

/// Interior positivity and `-w'' ≥ -1e-10` on a dense grid.
pub fn positivity_check(w: &ProfileW) -> Result<()> {
    if w.zero_count != 0 {
        return Err(Error::Contract(format!("profile has {} interior zeros", w.zero_count)));
    }
    let (a, b) = w.domain.bounds();
    for i in 1..2000 {
        let x = a + (b - a) * i as f64 / 2000.0;
        let (v, _, d2) = w.eval3(x);
        if v <= 0.0 {
            return Err(Error::Contract(format!("w({x}) = {v} is not positive")));
        }
        if -d2 < -1e-10 {
            return Err(Error::Contract(format!("-w''({x}) = {} < 0", -d2)));
        }
    }
    Ok(())
}

/// Multi-domain refinement from an approximate profile.
pub(crate) fn refine_piecewise(lp: &LocalProblem, points: &[f64], slopes: &[f64], seed: impl Fn(f64) -> f64) -> Result<Piecewise> {
    let np = points.len();
    let mut h = vec![0.0; np];
    for i in 0..np {
        let gl = if i > 0 { points[i] - points[i - 1] } else { f64::INFINITY };
        let gr = if i + 1 < np { points[i + 1] - points[i] } else { f64::INFINITY };
        let cap = (0.3 * gl.min(gr)).min(0.2);
        let mut r = cap;
        if i > 0 {
            r = r.min(patch_radius(lp, points[i], -1.0, -slopes[i], cap));
        }
        if i + 1 < np {
            r = r.min(patch_radius(lp, points[i], 1.0, slopes[i], cap));
        }
        h[i] = r;
    }
    let mdc = Mdc::new(lp, points, &h);
    let u: Vec<f64> = mdc.nodes().iter().map(|&x| seed(x)).collect();
    let p = Mdc::pack(slopes, points);
    let (u, p, _) = mdc.solve(u, p, 40)?;
    Ok(mdc.into_piecewise(&u, &p))
}

/// Solves the autonomous problem with `C₁ = 0`.
pub fn solve_autonomous(beta: f64, c: f64, lobes: usize, tol: f64) -> Result<ProfileW> {
    solve_planar(&ParamSet::planar_c(beta, c)?, lobes, tol)
}

/// Smallest lobe count whose half-period lies in the attainable range.
pub fn default_lobes(beta: f64) -> usize {
    beta.abs().floor() as usize + 1
}

/// Autonomous solve for planar-mode parameters.
pub fn solve_planar(params: &ParamSet, lobes: usize, tol: f64) -> Result<ProfileW> {
    if params.mode != Mode::Planar {
        return Err(Error::Parameter("solve_planar needs 2½D-mode parameters".into()));
    }
    if lobes == 0 {
        return Err(Error::Parameter("lobes ≥ 1 required".into()));
    }
    let (b, c) = (params.beta, params.c2);
    if params.is_linear() {
        if (b.abs() - lobes as f64).abs() > 0.0 {
            return Err(Error::NoSolution(format!("linear branch has |β| = {} lobes, {lobes} requested", b.abs())));
        }
        return Ok(ProfileW::new(*params, Repr::Sine(b)));
    }
    let s = autonomous::time_map_amplitude(b, c, lobes)?;
    let len = std::f64::consts::PI / lobes as f64;
    let shot = autonomous::shoot(b, c, s, 1e-3);
    let (arch, _, _) = autonomous::build_arch(b, c, &shot, len)?;
    let profile = ProfileW::new(*params, Repr::Arch { arch, len, lobes });
    finish(profile, &SolveOptions { tol, ..Default::default() })
}

/// Max `|w(φ) - w(π - φ)|` on a uniform grid.
pub fn symmetry_defect(w: &ProfileW) -> f64 {
    let (a, b) = w.domain.bounds();
    (0..=400)
        .map(|i| {
            let x = a + (b - a) * i as f64 / 400.0;
            (w.eval(x) - w.eval(a + b - x)).abs()
        })
        .fold(0.0, f64::max)
}

/// Independent oracle: two-sided shooting for `χ` from both poles, matched at
/// `θ = π/2` by a two-dimensional Newton iteration on `(χ(0), χ(π))`.
/// Valid for `β > 0`, where `χ` is smooth at the poles.
pub fn chi_shooting(params: &ParamSet, chi0: f64, chi_pi: f64) -> Result<(f64, f64)> {
    let b = params.beta;
    if !(b > 0.0) || params.mode != Mode::Axisymmetric {
        return Err(Error::Domain("χ shooting needs axisymmetric mode with β > 0".into()));
    }
    let k = (b - 1.0) * (b + 2.0);
    let g = |th: f64, chi: f64| {
        let s2 = th.sin().powi(2);
        let w = s2 * chi;
        let mut r = 0.0;
        if params.c1 != 0.0 {
            r += params.c1 * s2 * chi * w.abs().powf(4.0 / b);
        }
        if params.c2 != 0.0 {
            r += params.c2 * chi * w.abs().powf(2.0 / b);
        }
        r
    };
    // χ'' = -3cotθ χ' - kχ - g, integrated from the pole at `from` to π/2
    let integrate = |start: f64, dir: f64| -> (f64, f64) {
        let th0 = 1e-4;
        let c2 = -(k * start + g(0.0, start)) / 8.0;
        let mut th = th0;
        let mut y = [start + c2 * th0 * th0, 2.0 * c2 * th0];
        let pole = if dir > 0.0 { 0.0 } else { std::f64::consts::PI };
        let rhs = |th: f64, y: [f64; 2]| {
            let t = pole + dir * th;
            let cot = t.cos() / t.sin();
            // derivative along the local variable θ' = dir·(θ - pole)
            [y[1], -3.0 * dir * cot * y[1] - k * y[0] - g(t, y[0])]
        };
        let end = std::f64::consts::FRAC_PI_2;
        while th < end - 1e-15 {
            let h = (0.25 * th).min(2e-3).min(end - th);
            let k1 = rhs(th, y);
            let k2 = rhs(th + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = rhs(th + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = rhs(th + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            th += h;
        }
        (y[0], dir * y[1])
    };
    let mismatch = |a: f64, bb: f64| {
        let (v1, d1) = integrate(a, 1.0);
        let (v2, d2) = integrate(bb, -1.0);
        [v1 - v2, d1 - d2]
    };
    let (mut a, mut bb) = (chi0, chi_pi);
    for _ in 0..30 {
        let f = mismatch(a, bb);
        let scale = a.abs().max(bb.abs()).max(1e-300);
        if f[0].abs().max(f[1].abs()) < 1e-12 * scale {
            return Ok((a, bb));
        }
        let h = 1e-7 * scale;
        let fa = mismatch(a + h, bb);
        let fb = mismatch(a, bb + h);
        let j = [[(fa[0] - f[0]) / h, (fb[0] - f[0]) / h], [(fa[1] - f[1]) / h, (fb[1] - f[1]) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 {
            break;
        }
        let da = (-f[0] * j[1][1] + f[1] * j[0][1]) / det;
        let db = (-j[0][0] * f[1] + j[1][0] * f[0]) / det;
        a += da;
        bb += db;
        if da.abs().max(db.abs()) < 1e-14 * scale {
            return Ok((a, bb));
        }
    }
    let f = mismatch(a, bb);
    if f[0].abs().max(f[1].abs()) < 1e-9 {
        return Ok((a, bb));
    }
    Err(Error::NoConvergence { msg: "χ shooting did not match at π/2".into(), best_residual: f[0].abs().max(f[1].abs()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_messages() {
        let e = ParamSet::axisymmetric(1.5, 0.0, 1.0).unwrap_err();
        assert!(e.to_string().contains("α ∈ [0,2]"));
        let e = ParamSet::axisymmetric(-1.0, -1.0, 1.0).unwrap_err();
        assert!(e.to_string().contains("C₁ = 0"));
        assert!(ParamSet::planar(0.5, 0.0, 1.0).is_err());
        assert!(ParamSet::planar(3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn coefficient_map() {
        let p = ParamSet::axisymmetric(-3.0, -1.0, 1.0).unwrap();
        assert!((p.c1 - 1.2).abs() < 1e-15 && (p.c2 - 0.8).abs() < 1e-15);
        let q = ParamSet::axisymmetric_c(p.beta, p.c1, p.c2).unwrap();
        assert!((q.big_c1 + 1.0).abs() < 1e-14 && (q.big_c2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_residuals() {
        for n in 1..=5 {
            let w = ProfileW::catalog(n).unwrap();
            assert!(w.residual_certificate < 1e-12, "n={n} {}", w.residual_certificate);
        }
        let s = ProfileW::sine(2.0).unwrap();
        assert!(s.residual_certificate < 1e-12);
        assert_eq!(residual_ode(&ProfileW::zero(ParamSet::linear(2.0).unwrap())), 0.0);
    }

    #[test]
    fn chi_of_catalog() {
        let w = ProfileW::catalog(2).unwrap();
        let (c, d) = w.chi(0.7);
        assert!((c - 0.7f64.cos() / 2.0).abs() < 1e-15);
        assert!((d + 0.7f64.sin() / 2.0).abs() < 1e-15);
    }
}
