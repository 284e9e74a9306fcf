//! Builds fields from solved profiles and runs every applicable residual check.

use homflow::bvp::{solve_nonautonomous, solve_planar, default_lobes, Branch, ParamSet, SolveOptions};
use homflow::fields::HomogeneousField;
use homflow::verify::{curl_consistency, run_checks, sample_points, weak_form_check, Check, DEFAULT_SEED};

fn report(field: &HomogeneousField) -> homflow::Result<()> {
    for r in run_checks(field, &Check::ALL, 100, DEFAULT_SEED)? {
        println!("  {}", r.line());
    }
    if field.is_axisymmetric() && field.big_c2 == 0.0 {
        println!("  {}", curl_consistency(field, &sample_points(DEFAULT_SEED, 100))?.line());
    }
    if field.alpha < 0.0 && field.is_axisymmetric() {
        println!("  {}", weak_form_check(field, 20, DEFAULT_SEED)?.line());
    }
    Ok(())
}

fn main() -> homflow::Result<()> {
    for (alpha, c1, c2) in [(4.0, 0.0, 1.0), (4.0, -1.0, 0.0), (2.5, -1.0, 0.0), (-3.0, 0.0, 1.0), (-3.0, -1.0, 1.0)] {
        let params = ParamSet::axisymmetric(alpha, c1, c2)?;
        let branch = if params.beta > 0.0 && params.beta < 1.0 { Branch::Positive } else { Branch::Default };
        let w = solve_nonautonomous(&params, &SolveOptions { branch, ..Default::default() })?;
        println!("axisymmetric alpha={alpha} C1={c1} C2={c2}");
        report(&HomogeneousField::build_axisymmetric(&w, &params)?)?;
    }
    for (alpha, c1, c2) in [(4.0, 0.0, 1.0), (-2.0, -1.0, 1.0)] {
        let params = ParamSet::planar(alpha, c1, c2)?;
        let w = solve_planar(&params, default_lobes(params.beta), 1e-8)?;
        println!("2.5D alpha={alpha} C1={c1} C2={c2}");
        report(&HomogeneousField::build_25d(&w, &params)?)?;
    }
    Ok(())
}
