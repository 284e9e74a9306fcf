//! Multi-domain Chebyshev collocation with local series patches.
//!
//! The interval is cut at its singular points (endpoints and interior zeros).
//! Around each one the profile is a generalized power series `A s + Σ c_e s^e`;
//! between patches it is a chain of geometrically graded Chebyshev segments.
//! Unknowns: nodal values of every segment, the slopes `A_i` and the interior
//! zero locations `z_i`.

use nalgebra::DMatrix;

use super::series::{local_expansion, LocalProblem, Series};
use crate::banded::BandedSystem;
use crate::cheb::{cgl_nodes, diff_matrix, Cheb};
use crate::error::{Error, Result};

pub(crate) const SEGMENT_ORDER: usize = 12;
const GRADING: f64 = 2.0;
const EMAX: f64 = 20.0;
const MAX_SEGMENT: f64 = 0.12;

impl LocalProblem {
    /// `f` in `w'' + f(x, w) = 0`; `omt2 = 1 - x²`.
    pub fn f(&self, omt2: f64, w: f64) -> f64 {
        let aw = w.abs();
        if self.autonomous {
            return self.gamma * w + self.c2 * w * aw.powf(self.p2);
        }
        let mut r = self.gamma * w / omt2;
        if self.c1 != 0.0 {
            r += self.c1 * w * aw.powf(self.p1);
        }
        if self.c2 != 0.0 {
            r += self.c2 * w * aw.powf(self.p2) / omt2;
        }
        r
    }

    pub fn fw(&self, omt2: f64, w: f64) -> f64 {
        let aw = w.abs();
        if self.autonomous {
            return self.gamma + self.c2 * (1.0 + self.p2) * aw.powf(self.p2);
        }
        let mut r = self.gamma / omt2;
        if self.c1 != 0.0 {
            r += self.c1 * (1.0 + self.p1) * aw.powf(self.p1);
        }
        if self.c2 != 0.0 {
            r += self.c2 * (1.0 + self.p2) * aw.powf(self.p2) / omt2;
        }
        r
    }

    pub fn series(&self, z: f64, sigma: f64, a: f64) -> Series {
        local_expansion(self, z, sigma, a, EMAX)
    }

    /// `1 - x²` without cancellation near ±1.
    pub fn omt2(&self, x: f64) -> f64 {
        (1.0 - x) * (1.0 + x)
    }
}

/// A solved piecewise profile: series patches and Chebyshev segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    /// Singular points, ascending; the first and last are the domain ends.
    pub points: Vec<f64>,
    /// `dw/dt` at each singular point.
    pub slopes: Vec<f64>,
    /// Patch extents `[lo_i, hi_i]` around each singular point.
    pub patch: Vec<(f64, f64)>,
    /// Left (`σ=-1`) and right (`σ=+1`) series per point, in `s = |t - z|`.
    pub left: Vec<Option<Series>>,
    pub right: Vec<Option<Series>>,
    pub segments: Vec<Cheb>,
    dsegments: Vec<Cheb>,
    d2segments: Vec<Cheb>,
}

impl Piecewise {
    pub fn new(points: Vec<f64>, slopes: Vec<f64>, patch: Vec<(f64, f64)>, lp: &LocalProblem, segments: Vec<Cheb>) -> Self {
        let n = points.len();
        let mut left = vec![None; n];
        let mut right = vec![None; n];
        for i in 0..n {
            if i > 0 {
                left[i] = Some(lp.series(points[i], -1.0, -slopes[i]));
            }
            if i + 1 < n {
                right[i] = Some(lp.series(points[i], 1.0, slopes[i]));
            }
        }
        let dsegments: Vec<Cheb> = segments.iter().map(|c| c.derivative()).collect();
        let d2segments = dsegments.iter().map(|c| c.derivative()).collect();
        Piecewise { points, slopes, patch, left, right, segments, dsegments, d2segments }
    }

    /// Which singular point's patch contains `t`, if any.
    fn patch_of(&self, t: f64) -> Option<usize> {
        self.patch.iter().position(|&(lo, hi)| t >= lo && t <= hi)
    }

    /// Series and local variable for `t` inside patch `i`: `(series, s, σ)`.
    pub(crate) fn local(&self, i: usize, t: f64) -> (&Series, f64, f64) {
        let z = self.points[i];
        if (t >= z && self.right[i].is_some()) || self.left[i].is_none() {
            (self.right[i].as_ref().unwrap(), (t - z).max(0.0), 1.0)
        } else {
            (self.left[i].as_ref().unwrap(), (z - t).max(0.0), -1.0)
        }
    }

    fn segment_of(&self, t: f64) -> usize {
        let k = self.segments.partition_point(|c| c.b < t);
        k.min(self.segments.len() - 1)
    }

    /// `(w, w', w'')` at `t`.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        if let Some(i) = self.patch_of(t) {
            let (ser, s, sg) = self.local(i, t);
            let (w, d1, d2) = ser.eval3(s);
            return (w, sg * d1, d2);
        }
        let k = self.segment_of(t);
        (self.segments[k].eval(t), self.dsegments[k].eval(t), self.d2segments[k].eval(t))
    }

    /// Endpoint patch evaluated in the endpoint variable `s = 1 ∓ t`.
    pub fn endpoint_series(&self, right_end: bool) -> &Series {
        if right_end {
            self.left.last().unwrap().as_ref().unwrap()
        } else {
            self.right[0].as_ref().unwrap()
        }
    }

    pub fn endpoint_patch_size(&self, right_end: bool) -> f64 {
        if right_end {
            let (lo, hi) = *self.patch.last().unwrap();
            hi - lo
        } else {
            let (lo, hi) = self.patch[0];
            hi - lo
        }
    }

    /// Collocation and patch sample points, for residual certification.
    pub fn sample_points(&self, per_segment: usize) -> Vec<f64> {
        let mut pts = Vec::new();
        for c in &self.segments {
            for y in cgl_nodes(per_segment).iter().skip(1).take(per_segment - 1) {
                pts.push(c.a + (y + 1.0) * (c.b - c.a) / 2.0);
            }
        }
        for (i, &(lo, hi)) in self.patch.iter().enumerate() {
            let z = self.points[i];
            for k in 0..per_segment {
                let q = (std::f64::consts::PI * (k as f64 + 0.5) / (2.0 * per_segment as f64)).sin().powi(2);
                if hi > z {
                    pts.push(z + q * (hi - z));
                }
                if lo < z {
                    pts.push(z - q * (z - lo));
                }
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts
    }
}

struct Sub {
    region: usize,
    first: bool,
    last: bool,
    a: f64,
    b: f64,
}

pub(crate) struct Mdc<'a> {
    lp: &'a LocalProblem,
    m: usize,
    x: Vec<f64>,
    d: DMatrix<f64>,
    d2: DMatrix<f64>,
    /// Initial singular points; patch boundaries are frozen at these plus `h`.
    s0: Vec<f64>,
    bl: Vec<f64>,
    br: Vec<f64>,
    subs: Vec<Sub>,
}

fn layout(s: &[f64], h: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let mut bl = Vec::new();
    let mut br = Vec::new();
    let mut regions = Vec::new();
    for j in 0..s.len() - 1 {
        let a = s[j] + h[j];
        let b = s[j + 1] - h[j + 1];
        let mid = 0.5 * (a + b);
        let mut left = vec![a];
        let mut d = h[j];
        loop {
            d *= GRADING;
            if s[j] + d >= mid {
                break;
            }
            left.push(s[j] + d);
        }
        let mut right = vec![b];
        let mut d = h[j + 1];
        loop {
            d *= GRADING;
            if s[j + 1] - d <= mid {
                break;
            }
            right.push(s[j + 1] - d);
        }
        right.reverse();
        left.extend(right);
        let mut split = vec![left[0]];
        for w in left.windows(2) {
            let k = ((w[1] - w[0]) / MAX_SEGMENT).ceil().max(1.0) as usize;
            for q in 1..=k {
                split.push(w[0] + (w[1] - w[0]) * q as f64 / k as f64);
            }
        }
        let left = split;
        bl.push(a);
        br.push(b);
        regions.push(left);
    }
    (bl, br, regions)
}

impl<'a> Mdc<'a> {
    pub fn new(lp: &'a LocalProblem, s0: &[f64], h: &[f64]) -> Self {
        let m = SEGMENT_ORDER;
        let (bl, br, regions) = layout(s0, h);
        let mut subs = Vec::new();
        for (j, r) in regions.iter().enumerate() {
            let n = r.len() - 1;
            for q in 0..n {
                subs.push(Sub { region: j, first: q == 0, last: q + 1 == n, a: r[q], b: r[q + 1] });
            }
        }
        let d = diff_matrix(m);
        let d2 = &d * &d;
        Mdc { lp, m, x: cgl_nodes(m), d, d2, s0: s0.to_vec(), bl, br, subs }
    }

    pub fn n_unknowns(&self) -> usize {
        self.subs.len() * (self.m + 1)
    }

    fn n_points(&self) -> usize {
        self.s0.len()
    }

    /// Nodes of every segment, in unknown order.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_unknowns());
        for sb in &self.subs {
            for y in &self.x {
                v.push(sb.a + (y + 1.0) * (sb.b - sb.a) / 2.0);
            }
        }
        v
    }

    /// Parameter vector `[A_0, z_1, A_1, …, A_last]` to points and slopes.
    fn unpack(&self, p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let k = self.n_points() - 2;
        let mut s = vec![self.s0[0]];
        let mut a = vec![p[0]];
        for i in 0..k {
            s.push(p[1 + 2 * i]);
            a.push(p[2 + 2 * i]);
        }
        s.push(*self.s0.last().unwrap());
        a.push(*p.last().unwrap());
        (s, a)
    }

    pub fn pack(slopes: &[f64], points: &[f64]) -> Vec<f64> {
        let mut p = vec![slopes[0]];
        for i in 1..points.len() - 1 {
            p.push(points[i]);
            p.push(slopes[i]);
        }
        p.push(*slopes.last().unwrap());
        p
    }

    /// Column of the first parameter belonging to point `i`, and of region `j`'s unknowns.
    fn layout_columns(&self) -> (Vec<usize>, Vec<usize>) {
        let np = self.n_points();
        let mut pcol = vec![0; np];
        let mut rcol = vec![0; np - 1];
        let mut col = 1;
        for j in 0..np - 1 {
            rcol[j] = col;
            col += self.subs.iter().filter(|s| s.region == j).count() * (self.m + 1);
            if j + 1 < np - 1 {
                pcol[j + 1] = col;
                col += 2;
            } else {
                pcol[j + 1] = col;
            }
        }
        (pcol, rcol)
    }

    fn series_set(&self, s: &[f64], a: &[f64]) -> Vec<(Option<Series>, Option<Series>)> {
        (0..s.len())
            .map(|i| {
                let l = (i > 0).then(|| self.lp.series(s[i], -1.0, -a[i]));
                let r = (i + 1 < s.len()).then(|| self.lp.series(s[i], 1.0, a[i]));
                (l, r)
            })
            .collect()
    }

    /// Series matching rows for region `j`: `[left value, left slope, right value, right slope]`.
    fn series_rows(&self, j: usize, s: &[f64], ser: &[(Option<Series>, Option<Series>)], u0: (f64, f64), um: (f64, f64)) -> [f64; 4] {
        let sl = self.bl[j] - s[j];
        let (v, d, _) = ser[j].1.as_ref().unwrap().eval3(sl);
        let sr = s[j + 1] - self.br[j];
        let (vr, dr, _) = ser[j + 1].0.as_ref().unwrap().eval3(sr);
        [u0.0 - v, u0.1 - d, um.0 - vr, um.1 + dr]
    }

    /// Residual vector and Jacobian (analytic in the nodal values).
    fn assemble(&self, u: &[f64], p: &[f64], jac: bool) -> (Vec<f64>, Option<BandedSystem>) {
        let m = self.m;
        let (s, a) = self.unpack(p);
        let ser = self.series_set(&s, &a);
        let n = self.n_unknowns() + p.len();
        let mut r = vec![0.0; n];
        let mut jm = jac.then(|| BandedSystem::zeros(n));
        let (pcol, _) = self.layout_columns();
        let mut row = 0;
        let mut col = 1;
        for (idx, sb) in self.subs.iter().enumerate() {
            let sc = 2.0 / (sb.b - sb.a);
            let uu = &u[idx * (m + 1)..(idx + 1) * (m + 1)];
            let du: Vec<f64> = (0..=m).map(|i| sc * (0..=m).map(|k| self.d[(i, k)] * uu[k]).sum::<f64>()).collect();
            let d2u: Vec<f64> = (0..=m).map(|i| sc * (0..=m).map(|k| self.d[(i, k)] * du[k]).sum::<f64>()).collect();
            if sb.first {
                let j = sb.region;
                let sl = self.bl[j] - s[j];
                let (v, d, _) = ser[j].1.as_ref().unwrap().eval3(sl);
                r[row] = uu[0] - v;
                r[row + 1] = du[0] - d;
                if let Some(jm) = jm.as_mut() {
                    jm.set(row, col, 1.0);
                    for k in 0..=m {
                        jm.set(row + 1, col + k, sc * self.d[(0, k)]);
                    }
                }
                row += 2;
            }
            for i in 1..m {
                let x = sb.a + (self.x[i] + 1.0) / sc;
                let o = self.lp.omt2(x);
                r[row] = d2u[i] + self.lp.f(o, uu[i]);
                if let Some(jm) = jm.as_mut() {
                    for k in 0..=m {
                        jm.set(row, col + k, self.d2[(i, k)] * sc * sc);
                    }
                    jm.add(row, col + i, self.lp.fw(o, uu[i]));
                }
                row += 1;
            }
            if sb.last {
                let j = sb.region;
                let sr = s[j + 1] - self.br[j];
                let (v, d, _) = ser[j + 1].0.as_ref().unwrap().eval3(sr);
                r[row] = uu[m] - v;
                r[row + 1] = du[m] + d;
                if let Some(jm) = jm.as_mut() {
                    jm.set(row, col + m, 1.0);
                    for k in 0..=m {
                        jm.set(row + 1, col + k, sc * self.d[(m, k)]);
                    }
                }
                row += 2;
                col += m + 1;
                // skip the parameter columns of the next interior point
                if j + 2 < self.n_points() {
                    col += 2;
                }
            } else {
                let nb = &self.subs[idx + 1];
                let scn = 2.0 / (nb.b - nb.a);
                let un = &u[(idx + 1) * (m + 1)..(idx + 2) * (m + 1)];
                let dun0: f64 = scn * (0..=m).map(|k| self.d[(0, k)] * un[k]).sum::<f64>();
                r[row] = uu[m] - un[0];
                r[row + 1] = du[m] - dun0;
                if let Some(jm) = jm.as_mut() {
                    jm.set(row, col + m, 1.0);
                    jm.set(row, col + m + 1, -1.0);
                    for k in 0..=m {
                        jm.set(row + 1, col + k, sc * self.d[(m, k)]);
                        jm.set(row + 1, col + m + 1 + k, -scn * self.d[(0, k)]);
                    }
                }
                row += 2;
                col += m + 1;
            }
        }
        debug_assert_eq!(row, n);
        if let Some(jm) = jm.as_mut() {
            self.parameter_columns(jm, u, p, &s, &ser, &pcol);
        }
        (r, jm)
    }

    /// Finite-difference columns for the parameters; only series rows depend on them.
    fn parameter_columns(&self, jm: &mut BandedSystem, u: &[f64], p: &[f64], s: &[f64], ser: &[(Option<Series>, Option<Series>)], pcol: &[usize]) {
        let m = self.m;
        let np = self.n_points();
        // row index of each region's leading and trailing series rows
        let mut lead = vec![0; np - 1];
        let mut trail = vec![0; np - 1];
        let mut ends = vec![((0.0, 0.0), (0.0, 0.0)); np - 1];
        let mut row = 0;
        for (idx, sb) in self.subs.iter().enumerate() {
            let sc = 2.0 / (sb.b - sb.a);
            let uu = &u[idx * (m + 1)..(idx + 1) * (m + 1)];
            let dfirst: f64 = sc * (0..=m).map(|k| self.d[(0, k)] * uu[k]).sum::<f64>();
            let dlast: f64 = sc * (0..=m).map(|k| self.d[(m, k)] * uu[k]).sum::<f64>();
            if sb.first {
                lead[sb.region] = row;
                ends[sb.region].0 = (uu[0], dfirst);
                row += 2;
            }
            row += m - 1;
            if sb.last {
                trail[sb.region] = row;
                ends[sb.region].1 = (uu[m], dlast);
            }
            row += 2;
        }
        let base: Vec<[f64; 4]> = (0..np - 1).map(|j| self.series_rows(j, s, ser, ends[j].0, ends[j].1)).collect();
        let (_, a) = self.unpack(p);
        for i in 0..np {
            let interior = i > 0 && i + 1 < np;
            let nparam = if interior { 2 } else { 1 };
            for q in 0..nparam {
                let pidx = if i == 0 { 0 } else if interior { 2 * i - 2 + 1 + q } else { p.len() - 1 };
                let is_point = interior && q == 0;
                let hh = if is_point { 1e-7 } else { 1e-7 * a[i].abs().max(1e-3) };
                let mut pp = p.to_vec();
                pp[pidx] += hh;
                let (s2, a2) = self.unpack(&pp);
                let mut ser2 = ser.to_vec();
                ser2[i] = (
                    (i > 0).then(|| self.lp.series(s2[i], -1.0, -a2[i])),
                    (i + 1 < np).then(|| self.lp.series(s2[i], 1.0, a2[i])),
                );
                let c = pcol[i] + q;
                if i > 0 {
                    let j = i - 1;
                    let rr = self.series_rows(j, &s2, &ser2, ends[j].0, ends[j].1);
                    jm.set(trail[j], c, (rr[2] - base[j][2]) / hh);
                    jm.set(trail[j] + 1, c, (rr[3] - base[j][3]) / hh);
                }
                if i + 1 < np {
                    let j = i;
                    let rr = self.series_rows(j, &s2, &ser2, ends[j].0, ends[j].1);
                    jm.set(lead[j], c, (rr[0] - base[j][0]) / hh);
                    jm.set(lead[j] + 1, c, (rr[1] - base[j][1]) / hh);
                }
            }
        }
    }

    /// Newton iteration; returns the converged nodal values and parameters.
    pub fn solve(&self, mut u: Vec<f64>, mut p: Vec<f64>, max_iter: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let nu = u.len();
        let mut best = f64::INFINITY;
        let mut stall = 0;
        for _ in 0..max_iter {
            let (r, jm) = self.assemble(&u, &p, true);
            let rn = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !rn.is_finite() {
                break;
            }
            if rn < 1e-13 {
                return Ok((u, p, rn));
            }
            if rn > 0.5 * best {
                stall += 1;
            } else {
                stall = 0;
            }
            best = best.min(rn);
            if stall >= 3 {
                return Ok((u, p, rn));
            }
            let mut d: Vec<f64> = r.iter().map(|v| -v).collect();
            jm.unwrap().solve(&mut d)?;
            let (_, rcol) = self.layout_columns();
            let (pcol, _) = self.layout_columns();
            // scatter the banded solution back to (u, p)
            let np = self.n_points();
            let mut off = 0;
            for (j, &c0) in rcol.iter().enumerate() {
                let cnt = self.subs.iter().filter(|s| s.region == j).count() * (self.m + 1);
                for k in 0..cnt {
                    u[off + k] += d[c0 + k];
                }
                off += cnt;
            }
            let mut dp = vec![0.0; p.len()];
            dp[0] = d[pcol[0]];
            for i in 1..np - 1 {
                dp[2 * i - 1] = d[pcol[i]];
                dp[2 * i] = d[pcol[i] + 1];
            }
            *dp.last_mut().unwrap() = d[pcol[np - 1]];
            for (pi, di) in p.iter_mut().zip(&dp) {
                *pi += di;
            }
            let step = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            debug_assert_eq!(off, nu);
            if step < 1e-13 * umax.max(1e-300) {
                let (r, _) = self.assemble(&u, &p, false);
                let rn = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                return Ok((u, p, rn));
            }
        }
        let (r, _) = self.assemble(&u, &p, false);
        let rn = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if rn.is_finite() && rn < 1e-6 {
            return Ok((u, p, rn));
        }
        Err(Error::NoConvergence { msg: "multi-domain Newton did not converge".into(), best_residual: best })
    }

    /// Collocation residual at the interior nodes of every segment.
    pub fn nodal_residual(&self, u: &[f64]) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for (idx, sb) in self.subs.iter().enumerate() {
            let sc = 2.0 / (sb.b - sb.a);
            let uu = &u[idx * (m + 1)..(idx + 1) * (m + 1)];
            let du: Vec<f64> = (0..=m).map(|i| sc * (0..=m).map(|k| self.d[(i, k)] * uu[k]).sum::<f64>()).collect();
            for i in 1..m {
                let d2: f64 = sc * (0..=m).map(|k| self.d[(i, k)] * du[k]).sum::<f64>();
                let x = sb.a + (self.x[i] + 1.0) / sc;
                worst = worst.max((d2 + self.lp.f(self.lp.omt2(x), uu[i])).abs());
            }
        }
        worst
    }

    pub fn into_piecewise(&self, u: &[f64], p: &[f64]) -> Piecewise {
        let m = self.m;
        let (s, a) = self.unpack(p);
        let np = s.len();
        let mut patch = Vec::with_capacity(np);
        for i in 0..np {
            let lo = if i == 0 { s[0] } else { self.br[i - 1] };
            let hi = if i + 1 == np { s[np - 1] } else { self.bl[i] };
            patch.push((lo, hi));
        }
        let segments = self
            .subs
            .iter()
            .enumerate()
            .map(|(idx, sb)| Cheb::from_cgl_values(sb.a, sb.b, &u[idx * (m + 1)..(idx + 1) * (m + 1)]))
            .collect();
        Piecewise::new(s, a, patch, self.lp, segments)
    }
}

/// Patch radius from the decay of the series tail.
pub(crate) fn patch_radius(lp: &LocalProblem, z: f64, sigma: f64, a: f64, hmax: f64) -> f64 {
    let ser = lp.series(z, sigma, a);
    let mut h = hmax;
    for (e, c) in ser.terms() {
        if e > EMAX - 8.0 && c != 0.0 {
            h = h.min((1e-17 * a.abs() / c.abs()).powf(1.0 / (e - 1.0)));
        }
    }
    h
}
