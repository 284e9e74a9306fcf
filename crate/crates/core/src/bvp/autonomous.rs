//! The autonomous problem `-w'' = β²w + c w|w|^{2/β}` on `(0, π)`:
//! time-map quadrature, shooting, and arch construction.

use super::mdc::{patch_radius, Mdc, Piecewise};
use super::series::LocalProblem;
use crate::error::{Error, Result};
use crate::special::gauss_legendre;

/// Potential `V(w) = β²w²/2 + cβ|w|^{2+2/β} / (2(β+1))`.
pub fn potential(w: f64, beta: f64, c: f64) -> f64 {
    beta * beta * w * w / 2.0 + c * beta * w.abs().powf(2.0 + 2.0 / beta) / (2.0 * (beta + 1.0))
}

fn confining(beta: f64, c: f64) -> bool {
    beta != 0.0 && c >= 0.0 && (c == 0.0 || beta / (beta + 1.0) > 0.0)
}

/// Amplitude `W` with `V(W) = s²/2`.
fn turning_point(s: f64, beta: f64, c: f64) -> f64 {
    let e = 0.5 * s * s;
    let mut hi = s / beta.abs();
    while potential(hi, beta, c) < e {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if potential(mid, beta, c) < e {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Half-period between consecutive zeros for the orbit with `|w'| = s` at a zero.
pub fn time_map(s: f64, beta: f64, c: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("time map needs s > 0, got {s}")));
    }
    if !confining(beta, c) {
        return Err(Error::Domain(format!("potential is not confining for beta = {beta}, c = {c}")));
    }
    if c == 0.0 {
        return Ok(std::f64::consts::PI / beta.abs());
    }
    let w_top = turning_point(s, beta, c);
    let q = 2.0 + 2.0 / beta;
    let k = c * beta / (2.0 * (beta + 1.0));
    // E - V(W sin ϑ) written without cancellation near ϑ = π/2
    let gap = |th: f64| {
        let (sn, cs) = th.sin_cos();
        let one_minus_sin = cs * cs / (1.0 + sn);
        let lin = beta * beta * w_top * w_top * cs * cs / 2.0;
        let pw = -(q * (-one_minus_sin).ln_1p()).exp_m1();
        let nonlin = k * w_top.powf(q) * pw;
        lin + nonlin + (0.5 * s * s - potential(w_top, beta, c))
    };
    let integrand = |th: f64| {
        let g = gap(th);
        w_top * th.cos() / (2.0 * g).sqrt()
    };
    let (gx, gw) = gauss_legendre(24);
    let half = std::f64::consts::FRAC_PI_2;
    // geometric grading toward ϑ = 0, where |w|^q may be non-smooth
    let mut edges = vec![0.0];
    let mut b = half / 4f64.powi(14);
    while b < 0.25 * half {
        edges.push(b);
        b *= 4.0;
    }
    for i in 1..=8 {
        edges.push(0.25 * half + 0.75 * half * i as f64 / 8.0);
    }
    let mut total = 0.0;
    for win in edges.windows(2) {
        let (a, b) = (win[0], win[1]);
        for (x, w) in gx.iter().zip(&gw) {
            total += w * (b - a) / 2.0 * integrand(a + (x + 1.0) * (b - a) / 2.0);
        }
    }
    Ok(2.0 * total)
}

/// Attainable open range of `T(s)` over `s ∈ (0, ∞)`.
pub fn time_map_range(beta: f64) -> (f64, f64) {
    (0.0, std::f64::consts::PI / beta.abs())
}

/// One trajectory of the shooting method up to the first turning point.
#[derive(Debug, Clone)]
pub struct Shot {
    pub s: f64,
    /// Position of the first maximum of `|w|`; the half-period is twice this.
    pub x_turn: f64,
    pub amplitude: f64,
    /// `max |w'²/2 + V(w) - E|` along the trajectory.
    pub energy_drift: f64,
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
    pub dws: Vec<f64>,
}

pub(crate) fn local_problem(beta: f64, c: f64) -> LocalProblem {
    LocalProblem { gamma: beta * beta, c1: 0.0, c2: c, p1: 4.0 / beta, p2: 2.0 / beta, autonomous: true }
}

/// RK4 shooting from `w(0) = 0`, `w'(0) = s`, started off a series patch.
pub fn shoot(beta: f64, c: f64, s: f64, step: f64) -> Shot {
    let lp = local_problem(beta, c);
    let ser = lp.series(0.0, 1.0, s);
    let x0 = patch_radius(&lp, 0.0, 1.0, s, 1e-2).min(1e-2);
    let (w0, d0, _) = ser.eval3(x0);
    let acc = |w: f64| -lp.f(1.0, w);
    let e = 0.5 * s * s;
    let mut xs = vec![0.0, x0];
    let mut ws = vec![0.0, w0];
    let mut dws = vec![s, d0];
    let (mut x, mut w, mut v) = (x0, w0, d0);
    let mut drift = (0.5 * v * v + potential(w, beta, c) - e).abs();
    loop {
        let k1w = v;
        let k1v = acc(w);
        let k2w = v + 0.5 * step * k1v;
        let k2v = acc(w + 0.5 * step * k1w);
        let k3w = v + 0.5 * step * k2v;
        let k3v = acc(w + 0.5 * step * k2w);
        let k4w = v + step * k3v;
        let k4v = acc(w + step * k3w);
        let wn = w + step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        let vn = v + step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if vn * v <= 0.0 {
            // cubic Hermite for w' on [x, x+h] with slopes w''
            let (a0, a1) = (acc(w), acc(wn));
            let herm = |tau: f64| {
                let t2 = tau * tau;
                let t3 = t2 * tau;
                (2.0 * t3 - 3.0 * t2 + 1.0) * v
                    + (t3 - 2.0 * t2 + tau) * step * a0
                    + (-2.0 * t3 + 3.0 * t2) * vn
                    + (t3 - t2) * step * a1
            };
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if herm(mid) * v > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let tau = 0.5 * (lo + hi);
            let xt = x + tau * step;
            let wt = {
                let t2 = tau * tau;
                let t3 = t2 * tau;
                (2.0 * t3 - 3.0 * t2 + 1.0) * w
                    + (t3 - 2.0 * t2 + tau) * step * v
                    + (-2.0 * t3 + 3.0 * t2) * wn
                    + (t3 - t2) * step * vn
            };
            xs.push(xt);
            ws.push(wt);
            dws.push(0.0);
            drift = drift.max((potential(wt, beta, c) - e).abs());
            return Shot { s, x_turn: xt, amplitude: wt.abs(), energy_drift: drift, xs, ws, dws };
        }
        x += step;
        w = wn;
        v = vn;
        xs.push(x);
        ws.push(w);
        dws.push(v);
        drift = drift.max((0.5 * v * v + potential(w, beta, c) - e).abs());
        if x > 1e3 {
            return Shot { s, x_turn: f64::INFINITY, amplitude: w.abs(), energy_drift: drift, xs, ws, dws };
        }
    }
}

/// Root of a monotone scalar function by bracketing plus Illinois regula falsi.
pub(crate) fn solve_monotone(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    let mut side = 0;
    for _ in 0..300 {
        let c = if fa != fb { (a * fb - b * fa) / (fb - fa) } else { 0.5 * (a + b) };
        let c = if c <= a.min(b) || c >= a.max(b) { 0.5 * (a + b) } else { c };
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < tol * c.abs().max(1e-300) {
            return c;
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = 0;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Bracket `g(s) = 0` in `log s`, with `g` monotone.
pub(crate) fn bracket_log(g: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let mut s = 1e-6;
    let mut prev = g(s);
    while s < 1e8 {
        let next = s * 2.0;
        let v = g(next);
        if prev * v <= 0.0 {
            return Some((s, next));
        }
        prev = v;
        s = next;
    }
    None
}

/// Shooting amplitude `s` with `lobes · 2 x_turn(s) = π`.
pub fn shooting_amplitude(beta: f64, c: f64, lobes: usize, step: f64) -> Result<f64> {
    let target = std::f64::consts::PI / lobes as f64;
    check_attainable(beta, target)?;
    let g = |s: f64| 2.0 * shoot(beta, c, s, step).x_turn - target;
    let (a, b) = bracket_log(|s| time_map(s, beta, c).map(|t| t - target).unwrap_or(f64::NAN))
        .ok_or_else(|| Error::NoSolution("time map never reaches the target half-period".into()))?;
    // widen slightly so the discrete shooting root stays inside
    Ok(solve_monotone(g, 0.8 * a, 1.25 * b, 1e-14))
}

/// Quadrature root of `lobes · T(s) = π`.
pub fn time_map_amplitude(beta: f64, c: f64, lobes: usize) -> Result<f64> {
    let target = std::f64::consts::PI / lobes as f64;
    check_attainable(beta, target)?;
    let g = |s: f64| time_map(s, beta, c).map(|t| t - target).unwrap_or(f64::NAN);
    let (a, b) = bracket_log(g).ok_or_else(|| Error::NoSolution("time map never reaches the target half-period".into()))?;
    Ok(solve_monotone(g, a, b, 1e-15))
}

fn check_attainable(beta: f64, target: f64) -> Result<()> {
    let (lo, hi) = time_map_range(beta);
    if !(target > lo && target < hi) {
        return Err(Error::NoSolution(format!(
            "half-period {target:.6} is outside the attainable time-map range ({lo}, {hi:.6})"
        )));
    }
    Ok(())
}

/// Arch on `[0, L]` refined by multi-domain collocation from a shot.
pub(crate) fn build_arch(beta: f64, c: f64, shot: &Shot, len: f64) -> Result<(Piecewise, f64, f64)> {
    let lp = local_problem(beta, c);
    let s = shot.s;
    let hmax = 0.2 * len;
    let h = patch_radius(&lp, 0.0, 1.0, s, hmax);
    let pts = [0.0, len];
    let mdc = Mdc::new(&lp, &pts, &[h, h]);
    let seed = |x: f64| {
        let y = if x > 0.5 * len { len - x } else { x };
        let k = shot.xs.partition_point(|&v| v < y).clamp(1, shot.xs.len() - 1);
        let (x0, x1) = (shot.xs[k - 1], shot.xs[k]);
        let tau = if x1 > x0 { (y - x0) / (x1 - x0) } else { 0.0 };
        let hh = x1 - x0;
        let t2 = tau * tau;
        let t3 = t2 * tau;
        (2.0 * t3 - 3.0 * t2 + 1.0) * shot.ws[k - 1]
            + (t3 - 2.0 * t2 + tau) * hh * shot.dws[k - 1]
            + (-2.0 * t3 + 3.0 * t2) * shot.ws[k]
            + (t3 - t2) * hh * shot.dws[k]
    };
    let u: Vec<f64> = mdc.nodes().iter().map(|&x| seed(x)).collect();
    let p = Mdc::pack(&[s, -s], &pts);
    let (u, p, _) = mdc.solve(u, p, 40)?;
    let cert = mdc.nodal_residual(&u);
    let pw = mdc.into_piecewise(&u, &p);
    Ok((pw, cert, p[0]))
}
