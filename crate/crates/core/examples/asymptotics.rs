//! Optimized parameters against their small-overlap predictions, J = 2.

use optschwarz::asymptotics::{sweep, sweep_exponents, AsymptoticModel, AsymptoticVariant, ParameterRule};
use optschwarz::{OuterBc, ParamVariant, ProblemConfig, SearchPolicy};

fn main() -> optschwarz::Result<()> {
    let cfg = ProblemConfig::default().with_outer(OuterBc::Dirichlet);
    let policy = SearchPolicy::default();
    let overlaps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    for (variant, rule) in [
        (ParamVariant::Uniform, ParameterRule::OneParam),
        (ParamVariant::TwoSided, ParameterRule::TwoParam),
    ] {
        let model = AsymptoticModel::new(&cfg, AsymptoticVariant::TwoSubDirichlet, rule)?;
        let points = sweep(&cfg, variant, &overlaps, Some(&model), &policy)?;
        println!("{variant:?} (C = {:.6})", model.constant_c);
        for p in &points {
            let pred = p.predicted.as_ref().expect("model given");
            println!(
                "  delta {:.0e}: rho* {:.6} predicted {:.6}  params {:?} predicted {:?}",
                p.overlap,
                p.optimized.rho_star,
                pred.rho,
                p.optimized.params.as_vec(),
                pred.params.as_vec()
            );
        }
        let fit = sweep_exponents(&points)?;
        let params: Vec<String> = fit.params.iter().map(|f| format!("{:.4}", f.exponent)).collect();
        println!("  1 - rho ~ delta^{:.4}, params ~ delta^[{}]", fit.rate.exponent, params.join(", "));
    }
    Ok(())
}
