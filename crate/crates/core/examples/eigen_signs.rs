//! Principal eigenvalue of the singular operator across β, and the kernel at integer β.

use homflow::spectral::assemble_eigensystem;

fn main() -> homflow::Result<()> {
    for beta in [0.1, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0, -2.5, -4.0] {
        let sys = assemble_eigensystem(beta, 128)?;
        let fine = assemble_eigensystem(beta, 256)?;
        let smallest = sys.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        println!(
            "beta={beta:5}  mu1={:+.12e}  mu1(2M)-mu1={:.1e}  min|mu|={:.1e}  N={}",
            sys.eigenvalues[0],
            fine.eigenvalues[0] - sys.eigenvalues[0],
            smallest,
            sys.split_index
        );
    }
    Ok(())
}
