//! Closed-form two- and three-subdomain factors next to the dense eigenvalue solve.

use optschwarz::closed::ConvergenceFactor;
use optschwarz::{ProblemConfig, TransmissionParams};

fn main() -> optschwarz::Result<()> {
    let params = TransmissionParams::TwoSided {
        p_minus: 1.5,
        p_plus: 40.0,
    };
    for j in [2, 3] {
        let cfg = ProblemConfig::default().with_subdomains(j).with_overlap(1e-3);
        let rho = ConvergenceFactor::new(&params, &cfg)?;
        println!("J = {j}");
        for k in [0.0, 1.0, 10.0, 100.0, 1e3] {
            let (closed, dense) = (rho.rho(k)?, rho.rho_dense(k)?);
            println!("  k {k:>7}: closed {closed:.12} dense {dense:.12} diff {:.1e}", (closed - dense).abs());
        }
    }
    Ok(())
}
