//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr.

use std::io::Write;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use homflow::bvp::{
    default_lobes, positivity_check, refined_residual, residual_ode, shooting_amplitude, solve_nonautonomous,
    symmetry_defect, time_map_amplitude, Branch, ParamSet, ProfileW, SolveOptions,
};
use homflow::fields::HomogeneousField;
use homflow::levelset::{classify, extract_level_curve, nested, Classification};
use homflow::special::{geodesic_flow, w_profile};
use homflow::spectral::{assemble_autonomous, assemble_eigensystem, hardy_sides, inner_l2, isometry_check};
use homflow::verify::{
    beltrami_check, euler_residual, first_integral_check, homogeneity_check, sample_points_for,
    sphere_equations_residual, SphereProfile, DEFAULT_SEED,
};

const SOLVE_SET: [(f64, f64, f64); 5] = [(4.0, 0.0, 1.0), (4.0, -1.0, 0.0), (2.5, -1.0, 0.0), (-3.0, 0.0, 1.0), (-3.0, -1.0, 1.0)];

struct Solved {
    alpha: f64,
    c1: f64,
    c2: f64,
    params: ParamSet,
    w: ProfileW,
}

fn solves() -> &'static [Solved] {
    static CELL: OnceLock<Vec<Solved>> = OnceLock::new();
    CELL.get_or_init(|| {
        SOLVE_SET
            .iter()
            .map(|&(alpha, c1, c2)| {
                let params = ParamSet::axisymmetric(alpha, c1, c2).unwrap();
                let branch = if params.beta > 0.0 && params.beta < 1.0 { Branch::Positive } else { Branch::Default };
                let w = solve_nonautonomous(&params, &SolveOptions { branch, ..Default::default() }).unwrap();
                Solved { alpha, c1, c2, params, w }
            })
            .collect()
    })
}

fn solved_fields() -> Vec<(String, HomogeneousField)> {
    solves()
        .iter()
        .map(|s| {
            let f = HomogeneousField::build_axisymmetric(&s.w, &s.params).unwrap();
            (format!("solve({}, {}, {})", s.alpha, s.c1, s.c2), f)
        })
        .collect()
}

fn catalog_fields() -> Vec<(String, HomogeneousField)> {
    let mut out = Vec::new();
    for n in [-4, -3, -2, 0, 1, 2, 3, 4, 5] {
        out.push((format!("catalog_axi({n})"), HomogeneousField::catalog_axisymmetric(n).unwrap()));
    }
    for n in [-3, -2, -1, 0, 1, 2, 3, 4] {
        out.push((format!("catalog_2d({n})"), HomogeneousField::catalog_2d(n).unwrap()));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    out.push(("geodesic(a=b=1/√2, α=-2)".into(), HomogeneousField::geodesic(h, h, -2.0).unwrap()));
    out.push(("geodesic(a=1, b=0, α=-3)".into(), HomogeneousField::geodesic(1.0, 0.0, -3.0).unwrap()));
    out.push(("circular(a=1, α=1)".into(), HomogeneousField::circular(1.0, 1.0).unwrap()));
    out.push(("circular(a=2, α=-2)".into(), HomogeneousField::circular(2.0, -2.0).unwrap()));
    out
}

fn report(name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

#[test]
fn autonomous_spectrum_is_exact() {
    let mut worst = 0.0f64;
    for beta in [0.5, 1.5, 3.0] {
        let sys = assemble_autonomous(beta, 128).unwrap();
        for n in 1..=10 {
            let exact = (n * n) as f64 - beta * beta;
            worst = worst.max((sys.eigenvalues[n - 1] - exact).abs());
        }
    }
    report("autonomous spectrum n²−β², n ≤ 10, M = 128", worst < 1e-8, &format!("max error {worst:.2e}"));
}

#[test]
fn kernel_at_integer_beta() {
    let (mut worst_mu, mut worst_fn) = (0.0f64, 0.0f64);
    let mut found = true;
    for b in [1i64, 2, 3] {
        let sys = assemble_eigensystem(b as f64, 128).unwrap();
        let (k, mu) = sys
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(k, v)| (k, v.abs()))
            .unwrap();
        found &= mu < 1e-8;
        worst_mu = worst_mu.max(mu);
        let e = sys.eigenfunction(k).unwrap();
        let w = ProfileW::catalog(b).unwrap();
        let nrm = inner_l2(&w, &w).sqrt();
        let probe = 0.3;
        let sign = (e.eval(probe) / w.eval(probe)).signum();
        for i in 0..=400 {
            let t = -1.0 + 2.0 * i as f64 / 400.0;
            worst_fn = worst_fn.max((sign * e.eval(t) - w.eval(t) / nrm).abs());
        }
    }
    report(
        "kernel of −L_β at β ∈ {1,2,3} spanned by w_{β+1}",
        found && worst_fn < 1e-6,
        &format!("max |μ| {worst_mu:.2e}, eigenfunction max-norm error {worst_fn:.2e}"),
    );
}

#[test]
fn principal_eigenvalue_sign() {
    let mut ok = true;
    let mut detail = Vec::new();
    for beta in [0.1, 0.5, 0.9] {
        let mu = assemble_eigensystem(beta, 128).unwrap().eigenvalues[0];
        ok &= mu > 0.0;
        detail.push(format!("β={beta}: μ₁={mu:.4}"));
    }
    for beta in [1.0, 1.5, 3.0, -2.5, -4.0] {
        let mu = assemble_eigensystem(beta, 128).unwrap().eigenvalues[0];
        ok &= mu <= 1e-10;
        detail.push(format!("β={beta}: μ₁={mu:.4}"));
    }
    report("principal eigenvalue sign", ok, &detail.join(", "));
}

#[test]
fn explicit_solutions() {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        worst = worst.max(residual_ode(&ProfileW::catalog(n).unwrap()));
    }
    let exact: [(i64, Vec<(i128, i128)>); 3] = [
        (1, vec![(1, 2), (0, 1), (-1, 2)]),
        (2, vec![(0, 1), (1, 2), (0, 1), (-1, 2)]),
        (3, vec![(-1, 8), (0, 1), (3, 4), (0, 1), (-5, 8)]),
    ];
    let mut coeffs_ok = true;
    for (n, want) in &exact {
        let p = w_profile(*n).unwrap();
        coeffs_ok &= p.degree + 1 == want.len();
        for (k, c) in want.iter().enumerate() {
            coeffs_ok &= p.exact_coefficient(k) == *c;
        }
    }
    report(
        "w_{n+1}, n = 1..5, solve the linear ODE; closed forms of w_2, w_3, w_4",
        worst < 1e-12 && coeffs_ok,
        &format!("max residual {worst:.2e}, exact coefficients {}", if coeffs_ok { "match" } else { "differ" }),
    );
}

#[test]
fn nonautonomous_solves() {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in solves() {
        let b = s.params.beta;
        let cert = s.w.residual_certificate;
        let refined = refined_residual(&s.w);
        ok &= cert < 1e-8 && refined < 1e-6;
        let mut extra = String::new();
        if !(-2.0..1.0).contains(&b) {
            ok &= s.w.zero_count >= 1;
            extra = format!(" zeros={}", s.w.zero_count);
        }
        if b > 0.0 && b < 1.0 {
            let pos = positivity_check(&s.w).is_ok();
            ok &= pos;
            extra = format!(" positive={pos}");
        }
        detail.push(format!("({}, {}, {}) cert={cert:.1e} refined={refined:.1e}{extra}", s.alpha, s.c1, s.c2));
    }
    report("nonautonomous solves", ok, &detail.join("; "));
}

#[test]
fn autonomous_shooting_vs_time_map() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (beta, c) in [(0.5, 1.0), (3.0, 1.0), (-3.0, 1.0)] {
        let lobes = default_lobes(beta);
        let tm = time_map_amplitude(beta, c, lobes).unwrap();
        let sh = shooting_amplitude(beta, c, lobes, 1e-3).unwrap();
        let diff = (tm - sh).abs();
        ok &= diff < 1e-8;
        detail.push(format!("(β={beta}, c={c}) |Δs|={diff:.1e}"));
    }
    let w = homflow::bvp::solve_autonomous(0.5, 1.0, 1, 1e-8).unwrap();
    let sym = symmetry_defect(&w);
    ok &= sym < 1e-8 && w.zero_count == 0;
    detail.push(format!("positive-branch symmetry defect {sym:.1e}"));
    report("autonomous shooting vs time-map quadrature", ok, &detail.join(", "));
}

#[test]
fn field_certification() {
    let mut ok = true;
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for (name, f) in catalog_fields().into_iter().chain(solved_fields()) {
        let pts = sample_points_for(&f, DEFAULT_SEED, 100);
        let mut reps = euler_residual(&f, &pts);
        reps.push(homogeneity_check(&f, &pts, &[1e-3, 2.0, 1e3]).unwrap());
        reps.extend(first_integral_check(&f, &pts));
        for r in reps {
            ok &= r.pass && r.samples > 0;
            if r.max_rel > worst.0 {
                worst = (r.max_rel, format!("{name} {}", r.name));
            }
        }
        count += 1;
    }
    report(
        "field certification (Euler, divergence, homogeneity, first integrals)",
        ok,
        &format!("{count} fields, worst relative residual {:.2e} ({})", worst.0, worst.1),
    );
}

#[test]
fn beltrami_identity() {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in solves().iter().filter(|s| s.c1 == 0.0) {
        let f = HomogeneousField::build_axisymmetric(&s.w, &s.params).unwrap();
        let pts = sample_points_for(&f, DEFAULT_SEED, 100);
        let r = beltrami_check(&f, &pts).unwrap();
        ok &= r.max_rel < 1e-6;
        detail.push(format!("α={}: {:.2e}", s.alpha, r.max_rel));
    }
    ok &= detail.len() == 2;
    report("Beltrami identity for C₁ = 0", ok, &detail.join(", "));
}

#[test]
fn level_set_taxonomy() {
    use Classification::*;
    let mut ok = true;
    let mut detail = Vec::new();
    let table_b = [(-2, WedgedCurve), (-1, WedgedCurve), (0, Line), (3, JordanCurve), (4, Multifoil { lobes: 2 }), (5, Multifoil { lobes: 3 })];
    for (alpha, want) in table_b {
        let f = HomogeneousField::catalog_axisymmetric(alpha - 2).unwrap();
        let w = f.profile().unwrap();
        let got = classify(w, (alpha - 2) as f64).unwrap();
        ok &= got == want;
        detail.push(format!("axi α={alpha}: {got:?}"));
    }
    let table_a = [(-2, WedgedCurve), (-1, WedgedCurve), (0, Line), (2, JordanCurve), (3, Multifoil { lobes: 2 }), (4, Multifoil { lobes: 3 })];
    for (alpha, want) in table_a {
        let beta = (alpha - 1) as f64;
        let got = classify(&ProfileW::sine(beta).unwrap(), beta).unwrap();
        ok &= got == want;
        detail.push(format!("2d α={alpha}: {got:?}"));
    }
    let s = solves().iter().find(|s| s.alpha == 2.5).unwrap();
    let beta = s.params.beta;
    let got = classify(&s.w, beta).unwrap();
    ok &= got == JordanCurve;
    let curves: Vec<_> = [1.0, 0.5, 0.2].iter().map(|&c| extract_level_curve(&s.w, beta, c, 400).unwrap()).collect();
    let nest = nested(&curves[0], &curves[1]) && nested(&curves[1], &curves[2]);
    ok &= nest;
    detail.push(format!("solved α=2.5: {got:?}, nested={nest}"));
    report("level-set taxonomy", ok, &detail.join(", "));
}

#[test]
fn geodesic_flow_checks() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let alpha = -2.0;
    // u = (b²z/r)K^{-α/2} e_r - (b/r)K^{(1-α)/2} e_φ + a²K^{-α/2} e_z, K = a²r² - b²z²;
    // at (1,0,0): K = 1/2, e_φ = (0,1,0), so u = (0, -(1/√2)(1/2)^{3/2}, (1/2)(1/2)) = (0, -1/4, 1/4)
    let want = [0.0, -0.25, 0.25];
    let f = HomogeneousField::geodesic(h, h, alpha).unwrap();
    let (u, p) = f.evaluate([1.0, 0.0, 0.0]).unwrap();
    let o = geodesic_flow([1.0, 0.0, 0.0], h, h, alpha).unwrap();
    let err = (0..3).map(|i| (u[i] - want[i]).abs().max((o[i] - want[i]).abs())).fold(0.0, f64::max);
    let pts = sample_points_for(&f, DEFAULT_SEED, 50);
    let p_max = pts.iter().map(|&x| f.evaluate(x).unwrap().1.abs()).fold(p.abs(), f64::max);
    let reps = euler_residual(&f, &pts);
    let res = reps.iter().map(|r| r.max_rel).fold(0.0, f64::max);
    let ok = err < 1e-15 && p_max == 0.0 && res < 1e-8 && pts.len() == 50;
    report(
        "geodesic flow a = b = 1/√2, α = −2",
        ok,
        &format!("|u(1,0,0) − (0,−1/4,1/4)| {err:.1e}, max |p| {p_max}, Euler residual {res:.2e} at {} points", pts.len()),
    );
}

fn random_profile(rng: &mut ChaCha8Rng) -> ProfileW {
    let terms = (1..=8).map(|n| (rng.gen_range(-1.0..1.0) / n as f64, ProfileW::catalog(n).unwrap())).collect();
    ProfileW::combination(terms).unwrap()
}

#[test]
fn isometry_and_hardy() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let w = random_profile(&mut rng);
        let eta = random_profile(&mut rng);
        let r = isometry_check(&w, &eta).unwrap();
        let g = (r.gradient.0 - r.gradient.1).abs() / r.gradient.0.abs().max(1.0);
        let m = (r.weighted.0 - r.weighted.1).abs() / r.weighted.0.abs().max(1.0);
        worst = worst.max(g).max(m);
    }
    let one_minus_t2 = ProfileW::combination(vec![(2.0, ProfileW::catalog(1).unwrap())]).unwrap();
    let (lhs, rhs) = hardy_sides(&one_minus_t2);
    let anchor = (lhs - 8.0 / 3.0).abs().max((rhs - 32.0 / 3.0).abs());
    report(
        "isometry identities and Hardy anchor",
        worst < 1e-8 && anchor < 1e-12 && lhs <= rhs,
        &format!("isometry max error {worst:.2e} over 20 pairs, Hardy {lhs:.15} ≤ {rhs:.15}"),
    );
}

#[test]
fn sphere_system_consistency() {
    let mut ok = true;
    let mut worst = (0.0f64, String::new());
    let fields = catalog_fields().into_iter().chain(solved_fields()).filter(|(_, f)| f.is_axisymmetric());
    let mut count = 0;
    for (name, f) in fields {
        let sp = SphereProfile::from_field(&f, 200).unwrap();
        for r in sphere_equations_residual(&sp, f.alpha) {
            ok &= r.max_rel < 1e-6;
            if r.max_rel > worst.0 {
                worst = (r.max_rel, format!("{name} {}", r.name));
            }
        }
        count += 1;
    }
    report(
        "sphere-system consistency",
        ok && count >= 14,
        &format!("{count} axisymmetric fields, worst relative residual {:.2e} ({})", worst.0, worst.1),
    );
}
