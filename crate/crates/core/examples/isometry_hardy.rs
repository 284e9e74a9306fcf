//! Isometry identities between profiles and their sphere counterparts, and Hardy's inequality.

use homflow::bvp::ProfileW;
use homflow::spectral::{hardy_sides, isometry_check};

fn main() -> homflow::Result<()> {
    let one_minus_t2 = ProfileW::combination(vec![(2.0, ProfileW::catalog(1)?)])?;
    let (lhs, rhs) = hardy_sides(&one_minus_t2);
    println!("Hardy for 1-t^2: {lhs:.15} <= {rhs:.15}");
    for (i, j) in [(1, 1), (1, 2), (2, 3), (3, 5), (4, 4)] {
        let w = ProfileW::catalog(i)?;
        let eta = ProfileW::combination(vec![(1.0, ProfileW::catalog(j)?), (0.5, ProfileW::catalog(i)?)])?;
        let r = isometry_check(&w, &eta)?;
        println!(
            "w_{} vs w_{}+w_{}/2: gradient {:+.12e} / {:+.12e}  weighted {:+.12e} / {:+.12e}",
            i + 1,
            j + 1,
            i + 1,
            r.gradient.0,
            r.gradient.1,
            r.weighted.0,
            r.weighted.1
        );
    }
    Ok(())
}
