//! Solves the nonautonomous profile problem for several constant sets and
//! prints the residual certificates.

use std::time::Instant;

use homflow::bvp::{functional_i, solve_nonautonomous, Branch, ParamSet, SolveOptions};

fn main() -> homflow::Result<()> {
    for (alpha, c1, c2) in [(4.0, 0.0, 1.0), (4.0, -1.0, 0.0), (2.5, -1.0, 0.0), (-3.0, 0.0, 1.0), (-3.0, -1.0, 1.0)] {
        let params = ParamSet::axisymmetric(alpha, c1, c2)?;
        let branch = if params.beta > 0.0 && params.beta < 1.0 { Branch::Positive } else { Branch::Default };
        let start = Instant::now();
        let w = solve_nonautonomous(&params, &SolveOptions { branch, ..Default::default() })?;
        println!(
            "alpha={alpha:5} C1={c1:4} C2={c2:3}  certificate={:.2e} refined={:.2e} zeros={} max|w|={:.6} I={:.6e} ({:.2?})",
            w.residual_certificate,
            w.refined_residual,
            w.zero_count,
            w.max_abs(),
            functional_i(&w),
            start.elapsed()
        );
    }
    Ok(())
}
