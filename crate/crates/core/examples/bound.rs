//! Convergence factor for growing J under the many-subdomain bound.

use optschwarz::asymptotics::limiting_bound;
use optschwarz::optimizer::log_grid;
use optschwarz::{assemble_t, spectral_radius, OuterBc, ProblemConfig, TransmissionParams};

fn main() -> optschwarz::Result<()> {
    let p = 2.8396;
    let params = TransmissionParams::Uniform { p };
    println!("{:>10} {:>6} {:>12} {:>12}", "k", "J", "rho", "bound");
    for k in log_grid(1e-2, 1e2, 5) {
        for j in [8, 16, 32, 64] {
            let cfg = ProblemConfig::default()
                .with_subdomains(j)
                .with_outer(OuterBc::Robin { p_a: p, p_b: p });
            let rho = spectral_radius(&assemble_t(k, &params, &cfg)?.entries)?;
            println!("{k:>10.4} {j:>6} {rho:>12.8} {:>12.8}", limiting_bound(k, &params, &cfg)?);
        }
    }
    Ok(())
}
