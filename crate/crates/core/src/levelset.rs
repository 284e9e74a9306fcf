//! Stream-function level sets in the meridian half-plane.
//!
//! On each maximal arc where `w/C > 0` the level set `{ψ = C}` is the polar
//! curve `ρ(θ) = (w/C)^{1/β}`. Axisymmetric profiles use `w(cosθ)` and the
//! `(z, r)` half-plane; 2½D profiles use `w(φ)` and the upper `(x₁, x₂)`
//! half-plane, so the same polylines serve both.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bvp::{Domain, ProfileW};
use crate::error::{Error, Result};

/// Truncation radius for unbounded branches.
pub const RHO_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    JordanCurve,
    Multifoil { lobes: usize },
    WedgedCurve,
    Line,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polyline {
    pub theta: Vec<f64>,
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    /// Ends that reach the origin (`β > 0`).
    pub closed_at_origin: bool,
    /// Cut at `ρ = RHO_MAX` (`β < 0`).
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelCurve {
    pub level: f64,
    pub beta: f64,
    pub branches: Vec<Polyline>,
    pub classification: Classification,
}

/// Profile value as a function of the polar angle.
fn angle_value(w: &ProfileW, theta: f64) -> f64 {
    match w.domain {
        Domain::Interval => w.eval(theta.cos()),
        Domain::Angle => w.eval(theta),
    }
}

/// Interior zeros of `θ ↦ w` in ascending θ.
fn angle_zeros(w: &ProfileW) -> Vec<f64> {
    let mut z: Vec<f64> = match w.domain {
        Domain::Interval => w.zeros().iter().map(|t| t.clamp(-1.0, 1.0).acos()).collect(),
        Domain::Angle => w.zeros(),
    };
    z.sort_by(|a, b| a.partial_cmp(b).unwrap());
    z
}

/// Arcs `(θa, θb)` between consecutive zeros (including `0` and `π`).
pub fn sign_arcs(w: &ProfileW) -> Vec<(f64, f64)> {
    let mut e = vec![0.0];
    e.extend(angle_zeros(w));
    e.push(PI);
    e.windows(2).map(|p| (p[0], p[1])).collect()
}

/// Sign of `w` on the interior of an arc.
fn arc_sign(w: &ProfileW, (a, b): (f64, f64)) -> f64 {
    let probe = [0.5, 0.3, 0.7, 0.1, 0.9];
    for p in probe {
        let v = angle_value(w, a + p * (b - a));
        if v != 0.0 {
            return v.signum();
        }
    }
    0.0
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Polylines of `{ψ = C}` on every sign-compatible arc.
pub fn extract_level_curve(w: &ProfileW, beta: f64, c: f64, n_points: usize) -> Result<LevelCurve> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Domain("level C must be nonzero and finite".into()));
    }
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Parameter("β ≠ 0 required".into()));
    }
    let n = n_points.max(3);
    let classification = classify(w, beta)?;
    let mut branches = Vec::new();
    for arc in sign_arcs(w) {
        if arc_sign(w, arc) * c.signum() <= 0.0 {
            continue;
        }
        let (mut a, mut b) = arc;
        let truncated = beta < 0.0;
        if truncated {
            // ρ ≤ ρ_max  ⇔  w/C ≥ ρ_max^β
            let floor = RHO_MAX.powf(beta);
            let g = |th: f64| angle_value(w, th) / c - floor;
            let m = 4 * n;
            let grid: Vec<f64> = (1..m).map(|i| arc.0 + (arc.1 - arc.0) * i as f64 / m as f64).collect();
            let inside: Vec<usize> = (0..grid.len()).filter(|&i| g(grid[i]) >= 0.0).collect();
            match (inside.first(), inside.last()) {
                (Some(&i), Some(&j)) => {
                    a = if i == 0 { bisect(g, arc.0 + 1e-300, grid[0]) } else { bisect(g, grid[i - 1], grid[i]) };
                    b = if j + 1 == grid.len() { bisect(g, grid[j], arc.1) } else { bisect(g, grid[j], grid[j + 1]) };
                }
                _ => {
                    branches.push(Polyline { theta: vec![], z: vec![], r: vec![], closed_at_origin: false, truncated: true });
                    continue;
                }
            }
        }
        let mut pl = Polyline { theta: vec![], z: vec![], r: vec![], closed_at_origin: beta > 0.0, truncated };
        for i in 0..n {
            let th = a + (b - a) * i as f64 / (n - 1) as f64;
            let rho = if beta > 0.0 && (i == 0 || i == n - 1) {
                0.0
            } else {
                (angle_value(w, th) / c).max(0.0).powf(1.0 / beta)
            };
            pl.theta.push(th);
            pl.z.push(rho * th.cos());
            pl.r.push(rho * th.sin());
        }
        branches.push(pl);
    }
    Ok(LevelCurve { level: c, beta, branches, classification })
}

/// Topology of the level sets `{ψ = ±C}` from the sign structure of `w`.
pub fn classify(w: &ProfileW, beta: f64) -> Result<Classification> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Parameter("β ≠ 0 required for classification".into()));
    }
    let k = angle_zeros(w).len();
    Ok(if beta > 0.0 {
        if k == 0 {
            Classification::JordanCurve
        } else {
            Classification::Multifoil { lobes: k + 1 }
        }
    } else if k == 0 {
        Classification::Line
    } else {
        Classification::WedgedCurve
    })
}

/// `ψ = w/ρ^β` at a half-plane point.
pub fn psi_at(w: &ProfileW, beta: f64, z: f64, r: f64) -> f64 {
    let rho = z.hypot(r);
    angle_value(w, r.atan2(z)) / rho.powf(beta)
}

/// Largest `|ψ - C|/|C|` over the non-origin polyline points.
pub fn level_defect(w: &ProfileW, curve: &LevelCurve) -> f64 {
    let mut worst = 0.0f64;
    for b in &curve.branches {
        for i in 0..b.z.len() {
            if b.z[i] == 0.0 && b.r[i] == 0.0 {
                continue;
            }
            let d = (psi_at(w, curve.beta, b.z[i], b.r[i]) - curve.level).abs() / curve.level.abs();
            worst = worst.max(d);
        }
    }
    worst
}

/// `true` when every branch of `inner` lies inside the matching branch of
/// `outer` at equal θ.
pub fn nested(inner: &LevelCurve, outer: &LevelCurve) -> bool {
    if inner.branches.len() != outer.branches.len() {
        return false;
    }
    inner.branches.iter().zip(&outer.branches).all(|(a, b)| {
        a.theta.len() == b.theta.len()
            && (0..a.theta.len()).all(|i| {
                (a.theta[i] - b.theta[i]).abs() < 1e-14 && a.z[i].hypot(a.r[i]) <= b.z[i].hypot(b.r[i]) * (1.0 + 1e-14)
            })
    })
}

/// Strictly monotone θ and positive radius away from the ends.
pub fn is_simple(p: &Polyline) -> bool {
    let n = p.theta.len();
    p.theta.windows(2).all(|w| w[1] > w[0]) && (1..n.saturating_sub(1)).all(|i| p.z[i].hypot(p.r[i]) > 0.0)
}

/// CSV with columns `level, branch, theta, z, r`.
pub fn to_csv(curves: &[LevelCurve]) -> String {
    let mut s = String::from("level,branch,theta,z,r\n");
    for c in curves {
        for (k, b) in c.branches.iter().enumerate() {
            for i in 0..b.theta.len() {
                let _ = writeln!(s, "{:.17e},{},{:.17e},{:.17e},{:.17e}", c.level, k, b.theta[i], b.z[i], b.r[i]);
            }
        }
    }
    s
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// SVG of the curves in the half-plane, one colour per level.
pub fn to_svg(curves: &[LevelCurve], size: f64) -> String {
    let mut zmax = 1e-12f64;
    let mut rmax = 1e-12f64;
    for c in curves {
        for b in &c.branches {
            for i in 0..b.z.len() {
                zmax = zmax.max(b.z[i].abs());
                rmax = rmax.max(b.r[i]);
            }
        }
    }
    let ext = zmax.max(rmax) * 1.05;
    let (w, h) = (size, size / 2.0);
    let map = |z: f64, r: f64| (w / 2.0 + z / ext * w / 2.0, h - r / ext * h);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{}" viewBox="0 0 {w} {}">"#, h + 20.0, h + 20.0);
    let _ = writeln!(s, r#"<line x1="0" y1="{h}" x2="{w}" y2="{h}" stroke="black" stroke-width="1"/>"#);
    let mut levels: Vec<f64> = curves.iter().map(|c| c.level).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    for c in curves {
        let k = levels.iter().position(|&l| l == c.level).unwrap_or(0);
        let col = PALETTE[k % PALETTE.len()];
        for b in &c.branches {
            if b.z.is_empty() {
                continue;
            }
            let pts: Vec<String> = (0..b.z.len())
                .map(|i| {
                    let (x, y) = map(b.z[i], b.r[i]);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let dash = if b.truncated { r#" stroke-dasharray="4 2""# } else { "" };
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{col}" stroke-width="1.2"{dash} points="{}"><title>C = {}</title></polyline>"#,
                pts.join(" "),
                c.level
            );
        }
    }
    for (k, l) in levels.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="10" fill="{}">C = {l}</text>"#,
            4.0 + 70.0 * k as f64,
            h + 14.0,
            PALETTE[k % PALETTE.len()]
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w2_circle() {
        let w = ProfileW::catalog(1).unwrap();
        let c = extract_level_curve(&w, 1.0, 0.5, 101).unwrap();
        assert_eq!(c.branches.len(), 1);
        assert_eq!(c.classification, Classification::JordanCurve);
        let b = &c.branches[0];
        for i in 0..b.theta.len() {
            let rho = b.z[i].hypot(b.r[i]);
            assert!((rho - b.theta[i].sin().powi(2)).abs() < 1e-14);
        }
        assert!(level_defect(&w, &c) < 1e-12);
        assert!(extract_level_curve(&w, 1.0, -0.5, 101).unwrap().branches.is_empty());
    }

    #[test]
    fn w3_single_upper_lobe() {
        let w = ProfileW::catalog(2).unwrap();
        let c = extract_level_curve(&w, 2.0, 0.1, 101).unwrap();
        assert_eq!(c.branches.len(), 1);
        assert!(c.branches[0].theta.iter().all(|&t| t <= PI / 2.0 + 1e-12));
        assert_eq!(c.classification, Classification::Multifoil { lobes: 2 });
        assert_eq!(classify(&w, -3.0).unwrap(), Classification::WedgedCurve);
    }

    #[test]
    fn zero_level_rejected() {
        let w = ProfileW::catalog(1).unwrap();
        assert!(extract_level_curve(&w, 1.0, 0.0, 10).is_err());
        assert!(classify(&w, 0.0).is_err());
    }
}
