//! Generalized power series `Σ c_e s^e` with real exponents, used as local
//! expansions of profiles at the singular points (endpoints and zeros).

use std::collections::BTreeMap;

use crate::jet::Scalar;

fn key(e: f64) -> i64 {
    (e * 1e8).round() as i64
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    terms: BTreeMap<i64, (f64, f64)>,
}

impl Series {
    pub fn mono(e: f64, c: f64) -> Series {
        let mut s = Series::default();
        if c != 0.0 {
            s.terms.insert(key(e), (e, c));
        }
        s
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.terms.values().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&self, o: &Series, f: f64) -> Series {
        let mut r = self.clone();
        for (&k, &(e, c)) in &o.terms {
            let ent = r.terms.entry(k).or_insert((e, 0.0));
            ent.1 += f * c;
        }
        r.terms.retain(|_, v| v.1 != 0.0);
        r
    }

    pub fn mul(&self, o: &Series, emax: f64) -> Series {
        let mut r = Series::default();
        for &(e1, c1) in self.terms.values() {
            for &(e2, c2) in o.terms.values() {
                let e = e1 + e2;
                if e > emax + 1e-9 {
                    continue;
                }
                let ent = r.terms.entry(key(e)).or_insert((e, 0.0));
                ent.1 += c1 * c2;
            }
        }
        r.terms.retain(|_, v| v.1 != 0.0);
        r
    }

    pub fn scale(&self, f: f64) -> Series {
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            v.1 *= f;
        }
        r.terms.retain(|_, v| v.1 != 0.0);
        r
    }

    pub fn shift(&self, de: f64) -> Series {
        let mut r = Series::default();
        for &(e, c) in self.terms.values() {
            r.terms.insert(key(e + de), (e + de, c));
        }
        r
    }

    pub fn truncate(&self, emax: f64) -> Series {
        let mut r = self.clone();
        r.terms.retain(|_, v| v.0 <= emax + 1e-9);
        r
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.values().next().map(|v| v.0)
    }

    /// `(f, f', f'')` at `s > 0`.
    pub fn eval3(&self, s: f64) -> (f64, f64, f64) {
        let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
        if s == 0.0 {
            for &(e, c) in self.terms.values() {
                if e == 0.0 {
                    f += c;
                } else if e == 1.0 {
                    d1 += c;
                } else if e == 2.0 {
                    d2 += 2.0 * c;
                }
            }
            return (f, d1, d2);
        }
        for &(e, c) in self.terms.values() {
            let p = s.powf(e - 2.0);
            f += c * p * s * s;
            d1 += c * e * p * s;
            d2 += c * e * (e - 1.0) * p;
        }
        (f, d1, d2)
    }

    pub fn eval<T: Scalar>(&self, s: T) -> T {
        let mut f = T::cst(0.0);
        for &(e, c) in self.terms.values() {
            f = f + s.powf(e).scale(c);
        }
        f
    }

    /// `d/ds` termwise.
    pub fn derivative(&self) -> Series {
        let mut r = Series::default();
        for &(e, c) in self.terms.values() {
            if e != 0.0 {
                r.terms.insert(key(e - 1.0), (e - 1.0, c * e));
            }
        }
        r
    }

    /// Size of the largest-exponent terms, as `max |c_e|` over `e > emin`.
    pub fn tail_radius(&self, lead: f64, from: f64, eps: f64) -> f64 {
        let mut h = f64::INFINITY;
        for &(e, c) in self.terms.values() {
            if e > from && c != 0.0 {
                h = h.min((eps * lead.abs() / c.abs()).powf(1.0 / (e - 1.0)));
            }
        }
        h
    }
}

/// `(1 + φ)^q` for φ with positive exponents.
pub fn pow1p(phi: &Series, q: f64, emax: f64) -> Series {
    let mut r = Series::mono(0.0, 1.0);
    let em = match phi.min_exponent() {
        Some(e) => e,
        None => return r,
    };
    let kmax = (emax / em) as usize + 1;
    let mut term = Series::mono(0.0, 1.0);
    let mut coef = 1.0;
    for k in 1..=kmax {
        term = term.mul(phi, emax);
        coef *= (q - k as f64 + 1.0) / k as f64;
        if term.is_empty() {
            break;
        }
        r = r.add_scaled(&term, coef);
    }
    r
}

/// Right-hand side of `-w'' = a(s) w + c1 w|w|^{p1} + c2 b(s) w|w|^{p2}`.
#[derive(Debug, Clone, Copy)]
pub struct LocalProblem {
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub p1: f64,
    pub p2: f64,
    pub autonomous: bool,
}

/// Series of `1/(1-t²)` in `s` with `t = z + σ s`.
pub fn inverse_weight(z: f64, sigma: f64, emax: f64) -> Series {
    let kmax = emax as usize + 3;
    let mut r = Series::default();
    if (z.abs() - 1.0).abs() < 1e-15 {
        // 1 - t² = s(2 - s)
        for k in 0..kmax {
            r = r.add_scaled(&Series::mono(k as f64 - 1.0, 0.5f64.powi(k as i32 + 1)), 1.0);
        }
        return r;
    }
    let (d0, d1, d2) = (1.0 - z * z, -2.0 * z * sigma, -1.0);
    let mut b = vec![1.0 / d0];
    for k in 1..kmax {
        let prev2 = if k >= 2 { d2 * b[k - 2] } else { 0.0 };
        b.push(-(d1 * b[k - 1] + prev2) / d0);
    }
    for (k, bk) in b.into_iter().enumerate() {
        r = r.add_scaled(&Series::mono(k as f64, bk), 1.0);
    }
    r
}

/// Local expansion `w = A s + Σ c_e s^e` at the singular point `z`, side `σ`,
/// with `A = dw/ds`. Fixed-point iteration on `w'' = -rhs(w)` to order `emax`.
pub fn local_expansion(lp: &LocalProblem, z: f64, sigma: f64, a: f64, emax: f64) -> Series {
    let lin = Series::mono(1.0, a);
    if a == 0.0 {
        return lin;
    }
    let b = if lp.autonomous { Series::mono(0.0, 1.0) } else { inverse_weight(z, sigma, emax + 1.0) };
    let coef = b.scale(lp.gamma);
    let mut w = lin.clone();
    for _ in 0..400 {
        let phi = w.add_scaled(&lin, -1.0).shift(-1.0).scale(1.0 / a);
        let mut rhs = coef.mul(&w, emax);
        if lp.c1 != 0.0 {
            let t = pow1p(&phi, 1.0 + lp.p1, emax)
                .shift(1.0 + lp.p1)
                .scale(lp.c1 * a * a.abs().powf(lp.p1))
                .truncate(emax);
            rhs = rhs.add_scaled(&t, 1.0);
        }
        if lp.c2 != 0.0 {
            let t = pow1p(&phi, 1.0 + lp.p2, emax).shift(1.0 + lp.p2).scale(lp.c2 * a * a.abs().powf(lp.p2));
            let t = if lp.autonomous { t.truncate(emax) } else { b.mul(&t, emax) };
            rhs = rhs.add_scaled(&t, 1.0);
        }
        let mut next = lin.clone();
        for (e, c) in rhs.terms() {
            if e + 2.0 <= emax + 1e-9 {
                next = next.add_scaled(&Series::mono(e + 2.0, -c / ((e + 1.0) * (e + 2.0))), 1.0);
            }
        }
        let same = next.terms.len() == w.terms.len()
            && next.terms.iter().all(|(k, v)| {
                w.terms.get(k).is_some_and(|u| (u.1 - v.1).abs() <= 1e-15 * v.1.abs() + 1e-300)
            });
        w = next;
        if same {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow1p_matches_binomial() {
        let phi = Series::mono(1.0, 0.3);
        let r = pow1p(&phi, 0.5, 6.0);
        let s = 0.2;
        assert!((r.eval3(s).0 - (1.0 + 0.3 * s).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn endpoint_weight_series() {
        let b = inverse_weight(1.0, -1.0, 30.0);
        let s = 0.1;
        let t: f64 = 1.0 - s;
        assert!((b.eval3(s).0 - 1.0 / (1.0 - t * t)).abs() < 1e-14);
        let b = inverse_weight(0.3, 1.0, 30.0);
        let t = 0.3 + s;
        assert!((b.eval3(s).0 - 1.0 / (1.0 - t * t)).abs() < 1e-14);
    }

    #[test]
    fn local_expansion_solves_singular_ode() {
        let (beta, c1, c2): (f64, f64, f64) = (-5.0, 1.2, 0.8);
        let lp = LocalProblem { gamma: beta * (beta + 1.0), c1, c2, p1: 4.0 / beta, p2: 2.0 / beta, autonomous: false };
        let w = local_expansion(&lp, 1.0, -1.0, 0.7, 20.0);
        for s in [1e-6, 1e-3, 1e-2, 0.05] {
            let (v, _, d2) = w.eval3(s);
            let o = s * (2.0 - s);
            let r = d2 + lp.gamma * v / o + c1 * v * v.abs().powf(lp.p1) + c2 * v * v.abs().powf(lp.p2) / o;
            let scale = lp.gamma * v.abs() / o;
            assert!(r.abs() < 1e-9 * scale.max(1.0), "s={s} r={r}");
        }
    }
}
