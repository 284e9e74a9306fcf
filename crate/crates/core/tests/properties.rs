use std::sync::OnceLock;

use proptest::prelude::*;

use homflow::bvp::{solve_autonomous, solve_nonautonomous, ParamSet, ProfileW, SolveOptions};
use homflow::fields::HomogeneousField;
use homflow::levelset::{extract_level_curve, level_defect};
use homflow::spectral::{hardy_sides, isometry_check};

fn axisymmetric_solve() -> &'static ProfileW {
    static CELL: OnceLock<ProfileW> = OnceLock::new();
    CELL.get_or_init(|| {
        let params = ParamSet::axisymmetric(4.0, 0.0, 1.0).unwrap();
        solve_nonautonomous(&params, &SolveOptions::default()).unwrap()
    })
}

fn planar_solve() -> &'static ProfileW {
    static CELL: OnceLock<ProfileW> = OnceLock::new();
    CELL.get_or_init(|| solve_autonomous(0.5, 1.0, 1, 1e-8).unwrap())
}

fn combo(coeffs: &[f64]) -> ProfileW {
    let terms = coeffs.iter().enumerate().map(|(k, &a)| (a, ProfileW::catalog(k as i64 + 1).unwrap())).collect();
    ProfileW::combination(terms).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..8).prop_filter("nonzero", |v| v.iter().any(|a| a.abs() > 1e-3))
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    (0.2f64..3.0, 0.05f64..3.09, 0.0f64..std::f64::consts::TAU).prop_map(|(rho, th, ph)| {
        [rho * th.sin() * ph.cos(), rho * th.sin() * ph.sin(), rho * th.cos()]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn scaled_profile_solves_rescaled_problem(lambda in 0.1f64..10.0) {
        let w = axisymmetric_solve();
        let s = w.scaled(lambda).unwrap();
        prop_assert!(s.residual_certificate < 1e-7, "λ={lambda}: {:.2e}", s.residual_certificate);
        let p = planar_solve().scaled(lambda).unwrap();
        prop_assert!(p.residual_certificate < 1e-7, "λ={lambda}: {:.2e}", p.residual_certificate);
    }

    #[test]
    fn sign_and_reflection_symmetry(x in -0.99f64..0.99) {
        let w = axisymmetric_solve();
        let n = w.negated();
        let r = w.reflected();
        prop_assert!(n.residual_certificate < 1e-7 && r.residual_certificate < 1e-7);
        prop_assert_eq!(n.eval(x), -w.eval(x));
        prop_assert_eq!(r.eval(x), w.eval(-x));
        let pw = planar_solve();
        let phi = 1.5 * (x + 1.0);
        prop_assert!((pw.reflected().eval(phi) - pw.eval(std::f64::consts::PI - phi)).abs() < 1e-14);
    }

    #[test]
    fn hardy_inequality(c in coeffs()) {
        let (lhs, rhs) = hardy_sides(&combo(&c));
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }

    #[test]
    fn isometry_identities(a in coeffs(), b in coeffs()) {
        let r = isometry_check(&combo(&a), &combo(&b)).unwrap();
        let g = (r.gradient.0 - r.gradient.1).abs() / r.gradient.0.abs().max(1.0);
        let m = (r.weighted.0 - r.weighted.1).abs() / r.weighted.0.abs().max(1.0);
        prop_assert!(g < 1e-8 && m < 1e-8, "gradient {g:.2e}, weighted {m:.2e}");
    }

    #[test]
    fn catalog_fields_are_homogeneous(n in prop::sample::select(vec![-3i64, -2, 0, 1, 2, 3]), x in point(), lambda in 0.01f64..100.0) {
        for f in [HomogeneousField::catalog_axisymmetric(n).unwrap(), HomogeneousField::catalog_2d(n).unwrap()] {
            let (u, p) = f.evaluate(x).unwrap();
            let (v, q) = f.evaluate([lambda * x[0], lambda * x[1], lambda * x[2]]).unwrap();
            let k = lambda.powf(f.alpha);
            let un = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            for i in 0..3 {
                prop_assert!((k * v[i] - u[i]).abs() <= 1e-12 * un.max(1e-300) * 10.0);
            }
            prop_assert!((k * k * q - p).abs() <= 1e-11 * p.abs().max(un * un));
        }
    }

    #[test]
    fn solved_field_is_homogeneous(x in point(), lambda in 0.01f64..100.0) {
        let w = axisymmetric_solve();
        let f = HomogeneousField::build_axisymmetric(w, &w.params).unwrap();
        let (u, _) = f.evaluate(x).unwrap();
        let (v, _) = f.evaluate([lambda * x[0], lambda * x[1], lambda * x[2]]).unwrap();
        let k = lambda.powf(f.alpha);
        let un = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        for i in 0..3 {
            prop_assert!((k * v[i] - u[i]).abs() <= 1e-11 * un);
        }
    }

    #[test]
    fn level_curves_lie_on_their_level(c in 0.05f64..5.0) {
        let w = axisymmetric_solve();
        let curve = extract_level_curve(w, w.params.beta, c, 200).unwrap();
        prop_assert!(level_defect(w, &curve) < 1e-10);
    }
}
