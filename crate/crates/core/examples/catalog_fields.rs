//! Evaluates the closed-form catalog flows and checks them against the Euler equations.

use homflow::fields::HomogeneousField;
use homflow::verify::{run_checks, Check, DEFAULT_SEED};

fn main() -> homflow::Result<()> {
    let mut fields = Vec::new();
    for n in [-3, -2, 0, 1, 2, 3] {
        fields.push((format!("axisymmetric n={n}"), HomogeneousField::catalog_axisymmetric(n)?));
    }
    for n in [-2, -1, 0, 1, 2] {
        fields.push((format!("planar n={n}"), HomogeneousField::catalog_2d(n)?));
    }
    fields.push(("circular a=1 alpha=2".into(), HomogeneousField::circular(1.0, 2.0)?));
    for (name, f) in &fields {
        let (u, p) = f.evaluate([1.0, 0.5, 0.25])?;
        let worst = run_checks(f, &Check::ALL, 100, DEFAULT_SEED)?.iter().map(|r| r.max_rel).fold(0.0, f64::max);
        println!(
            "{name:22} alpha={:3}  u(1,.5,.25)=({:+.6}, {:+.6}, {:+.6})  p={:+.6}  worst residual {worst:.1e}",
            f.alpha, u[0], u[1], u[2], p
        );
    }
    Ok(())
}
