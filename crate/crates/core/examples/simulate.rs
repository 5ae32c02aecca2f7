//! Finite-difference Schwarz iteration against the Fourier prediction.

use optschwarz::simulator::{discretize, modewise_rates, run_osm, DEFAULT_ITERATIONS};
use optschwarz::{optimize, ParamVariant, ProblemConfig, SearchPolicy, TransmissionParams};

fn main() -> optschwarz::Result<()> {
    let cfg = ProblemConfig::default().with_overlap(0.04);
    let policy = SearchPolicy {
        k_min: cfg.lowest_frequency(),
        ..SearchPolicy::default()
    };
    let opt = optimize(&cfg, ParamVariant::Uniform, &policy)?;
    println!("optimized p = {:?}, rho* = {:.6}", opt.params.as_vec(), opt.rho_star);
    for h in [0.02, 0.01, 0.005] {
        let disc = discretize(&cfg, h, &opt.params)?;
        let r = run_osm(&disc, DEFAULT_ITERATIONS, 1)?;
        println!(
            "h = {h:<6} measured {:.6} predicted {:.6} gap {:.2e} monotone {}",
            r.contraction, r.prediction, r.relative_gap, r.monotone_tail
        );
    }
    let disc = discretize(&cfg, 0.01, &opt.params)?;
    for m in modewise_rates(&disc, &[1, 3, 5, 99], DEFAULT_ITERATIONS)? {
        println!("mode {:>3} k = {:>8.3} measured {:.6} predicted {:.6}", m.mode, m.k, m.measured, m.predicted);
    }

    let classical = ProblemConfig::default().with_overlap(0.2);
    let disc = discretize(&classical, 0.01, &TransmissionParams::Uniform { p: 1e6 })?;
    let r = run_osm(&disc, DEFAULT_ITERATIONS, 1)?;
    println!("p = 1e6, delta = 0.2: measured {:.6} predicted {:.6}", r.contraction, r.prediction);
    Ok(())
}
