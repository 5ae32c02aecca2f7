//! Optimized parameters for four to six subdomains over a range of overlaps.

use std::time::Instant;

use optschwarz::{optimize, ParamVariant, ProblemConfig, SearchPolicy};

fn main() -> optschwarz::Result<()> {
    let policy = SearchPolicy::default();
    let variants: Vec<ParamVariant> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<optschwarz::Result<_>>()?;
    let variants = if variants.is_empty() {
        vec![ParamVariant::Uniform, ParamVariant::Full]
    } else {
        variants
    };
    for j in 4..=6 {
        for delta in [1e-2, 1e-3, 1e-4, 1e-5] {
            let cfg = ProblemConfig::default().with_subdomains(j).with_overlap(delta);
            for &v in &variants {
                let t = Instant::now();
                let r = optimize(&cfg, v, &policy)?;
                let p: Vec<String> = r.params.as_vec().iter().map(|p| format!("{p:.4}")).collect();
                println!(
                    "J={j} delta={delta:.0e} {v:<9} rho={:.4} p=[{}] evals={} {:.1}s",
                    r.rho_star,
                    p.join(", "),
                    r.evaluations,
                    t.elapsed().as_secs_f64()
                );
            }
        }
    }
    Ok(())
}
