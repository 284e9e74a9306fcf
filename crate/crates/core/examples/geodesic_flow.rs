//! Straight-streamline flow supported in a cone, with constant pressure.

use homflow::fields::HomogeneousField;
use homflow::verify::{euler_residual, homogeneity_check, sample_points_for, DEFAULT_SEED};

fn main() -> homflow::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let f = HomogeneousField::geodesic(h, h, -2.0)?;
    for x in [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.6, 0.8, 0.3], [2.0, 0.0, -1.0]] {
        let (u, p) = f.evaluate(x)?;
        println!("x={x:?}  u=({:+.6}, {:+.6}, {:+.6})  p={p}", u[0], u[1], u[2]);
    }
    let pts = sample_points_for(&f, DEFAULT_SEED, 50);
    for r in euler_residual(&f, &pts) {
        println!("{}", r.line());
    }
    println!("{}", homogeneity_check(&f, &pts, &[1e-3, 2.0, 1e3])?.line());
    Ok(())
}
