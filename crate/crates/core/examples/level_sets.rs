//! Level curves of the stream function for catalog and solved profiles; writes SVG files.

use homflow::bvp::{solve_nonautonomous, Branch, ParamSet, ProfileW, SolveOptions};
use homflow::levelset::{classify, extract_level_curve, level_defect, nested, to_svg};

fn main() -> homflow::Result<()> {
    let out = std::env::temp_dir();
    for (n, beta) in [(1, 1.0), (2, 2.0), (3, 3.0), (2, -3.0), (1, -2.0)] {
        let w = ProfileW::catalog(n)?;
        println!("w_{} with beta={beta}: {:?}", n + 1, classify(&w, beta)?);
    }
    let params = ParamSet::axisymmetric(2.5, -1.0, 0.0)?;
    let w = solve_nonautonomous(&params, &SolveOptions { branch: Branch::Positive, ..Default::default() })?;
    let curves = [0.2, 0.5, 1.0]
        .iter()
        .map(|&c| extract_level_curve(&w, params.beta, c, 400))
        .collect::<homflow::Result<Vec<_>>>()?;
    for c in &curves {
        println!("solved alpha=2.5, C={}: {} branch(es), defect {:.1e}", c.level, c.branches.len(), level_defect(&w, c));
    }
    println!("classification {:?}, nested {}", classify(&w, params.beta)?, nested(&curves[2], &curves[1]) && nested(&curves[1], &curves[0]));
    let path = out.join("homflow_levels.svg");
    std::fs::write(&path, to_svg(&curves, 480.0))?;
    println!("wrote {}", path.display());
    Ok(())
}
