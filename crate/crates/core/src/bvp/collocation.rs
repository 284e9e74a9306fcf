//! Global Chebyshev collocation with bordered continuation from the linear
//! branch. Produces a smooth approximation whose zeros and slopes seed the
//! multi-domain refinement.

use nalgebra::{DMatrix, DVector};

use super::series::LocalProblem;
use crate::cheb::{cgl_nodes, cgl_one_minus_x2, diff_matrix, Cheb};
use crate::error::{Error, Result};
use crate::special::w_profile;

const EPS: f64 = 1e-6;

/// Smallest integer `n ≥ 1` with `n(n+1) > γ`.
pub fn continuation_index(gamma: f64) -> usize {
    let mut n = 1usize;
    while (n * (n + 1)) as f64 <= gamma + 1e-12 {
        n += 1;
    }
    n
}

fn regularized(v: f64, p: f64, eps: f64) -> (f64, f64) {
    let q = v * v + eps * eps;
    let m = q.powf(p / 2.0);
    (v * m, m + v * v * p * q.powf(p / 2.0 - 1.0))
}

fn lu_solve(j: DMatrix<f64>, r: DVector<f64>) -> Result<DVector<f64>> {
    j.lu().solve(&r).ok_or_else(|| Error::NoConvergence { msg: "singular collocation Jacobian".into(), best_residual: f64::NAN })
}

/// Global solve on `m` CGL nodes; returns the interpolant of the profile.
pub fn global_solve(lp: &LocalProblem, m: usize, steps: usize) -> Result<Cheb> {
    let x = cgl_nodes(m);
    let o: Vec<f64> = cgl_one_minus_x2(m)[1..m].to_vec();
    let d = diff_matrix(m);
    let d2 = &d * &d;
    let a = d2.view((1, 1), (m - 1, m - 1)).into_owned();
    let t = &x[1..m];
    let k = m - 1;
    let gamma = lp.gamma;
    let n = continuation_index(gamma);
    let seed = w_profile(n as i64)?;
    let mut v: Vec<f64> = t.iter().map(|&t| seed.eval(t)).collect();
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v.iter_mut().for_each(|x| *x /= vmax);
    let reference = v.clone();
    let rr: f64 = reference.iter().map(|x| x * x).sum();
    let use_c2 = lp.c2 > 0.0;
    let (cc, p) = if use_c2 { (lp.c2, lp.p2) } else { (lp.c1, lp.p1) };
    if cc <= 0.0 {
        return Err(Error::Parameter("continuation needs c1 > 0 or c2 > 0".into()));
    }
    let nonlinear = |v: f64, i: usize| {
        let (f, df) = regularized(v, p, EPS);
        if use_c2 {
            (cc * f / o[i], cc * df / o[i])
        } else {
            (cc * f, cc * df)
        }
    };
    let g0 = (n * (n + 1)) as f64;
    let mut lam = 0.0;
    for step in 1..=steps {
        let g = g0 + (gamma - g0) * step as f64 / steps as f64;
        for _ in 0..60 {
            let mut jm = DMatrix::<f64>::zeros(k + 1, k + 1);
            let mut f = DVector::<f64>::zeros(k + 1);
            let av = &a * DVector::from_column_slice(&v);
            for i in 0..k {
                let (nv, dn) = nonlinear(v[i], i);
                f[i] = av[i] + g / o[i] * v[i] + lam * nv;
                for c in 0..k {
                    jm[(i, c)] = a[(i, c)];
                }
                jm[(i, i)] += g / o[i] + lam * dn;
                jm[(i, k)] = nv;
                jm[(k, i)] = reference[i];
            }
            f[k] = v.iter().zip(&reference).map(|(a, b)| a * b).sum::<f64>() - rr;
            let dx = lu_solve(jm, -f)?;
            for i in 0..k {
                v[i] += dx[i];
            }
            lam += dx[k];
            if dx.amax() < 1e-12 {
                break;
            }
        }
    }
    if lam <= 0.0 || !lam.is_finite() {
        return Err(Error::NoConvergence { msg: format!("continuation ended with amplitude factor {lam:.3e} <= 0"), best_residual: f64::NAN });
    }
    let mut w: Vec<f64> = v.iter().map(|x| lam.powf(1.0 / p) * x).collect();
    if lp.c1 > 0.0 && lp.c2 > 0.0 {
        let hsteps = 10;
        for step in 1..=hsteps {
            let c1 = lp.c1 * step as f64 / hsteps as f64;
            for _ in 0..60 {
                let wmax = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let e = EPS * wmax;
                let aw = &a * DVector::from_column_slice(&w);
                let mut jm = a.clone();
                let mut f = DVector::<f64>::zeros(k);
                for i in 0..k {
                    let (n1, d1) = regularized(w[i], lp.p1, e);
                    let (n2, d2) = regularized(w[i], lp.p2, e);
                    f[i] = aw[i] + gamma / o[i] * w[i] + c1 * n1 + lp.c2 * n2 / o[i];
                    jm[(i, i)] += gamma / o[i] + c1 * d1 + lp.c2 * d2 / o[i];
                }
                let dx = lu_solve(jm, -f)?;
                for i in 0..k {
                    w[i] += dx[i];
                }
                let wmax = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if dx.amax() < 1e-12 * wmax {
                    break;
                }
            }
        }
    }
    let mut full = vec![0.0; m + 1];
    full[1..m].copy_from_slice(&w);
    Ok(Cheb::from_cgl_values(-1.0, 1.0, &full))
}

/// Interior sign changes of a Chebyshev interpolant, refined by bisection.
pub fn interior_zeros(c: &Cheb, margin: f64) -> Vec<f64> {
    let n = 4000;
    let (a, b) = (c.a + margin, c.b - margin);
    let mut zs = Vec::new();
    let mut xl = a;
    let mut fl = c.eval(a);
    for i in 1..=n {
        let xr = a + (b - a) * i as f64 / n as f64;
        let fr = c.eval(xr);
        if fl == 0.0 {
            zs.push(xl);
        } else if fl * fr < 0.0 {
            let (mut lo, mut hi, mut flo) = (xl, xr, fl);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = c.eval(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            zs.push(0.5 * (lo + hi));
        }
        xl = xr;
        fl = fr;
    }
    zs
}
