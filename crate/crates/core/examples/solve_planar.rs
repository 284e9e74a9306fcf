//! Autonomous profiles on (0, π): time-map root, shooting root, and the
//! collocated multi-lobe profile.

use std::time::Instant;

use homflow::bvp::{default_lobes, shooting_amplitude, solve_autonomous, symmetry_defect, time_map_amplitude};

fn main() -> homflow::Result<()> {
    for (beta, c) in [(0.5, 1.0), (3.0, 1.0), (-3.0, 1.0)] {
        let lobes = default_lobes(beta);
        let start = Instant::now();
        let s_quad = time_map_amplitude(beta, c, lobes)?;
        let s_shoot = shooting_amplitude(beta, c, lobes, 1e-3)?;
        let w = solve_autonomous(beta, c, lobes, 1e-8)?;
        println!(
            "beta={beta:4} c={c} lobes={lobes}  s(quadrature)={s_quad:.12} s(shooting)={s_shoot:.12} diff={:.1e} certificate={:.2e} refined={:.2e} symmetry={:.1e} ({:.2?})",
            (s_quad - s_shoot).abs(),
            w.residual_certificate,
            w.refined_residual,
            symmetry_defect(&w),
            start.elapsed()
        );
    }
    Ok(())
}
