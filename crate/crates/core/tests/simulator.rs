use optschwarz::simulator::{discretize, modewise_rates, run_from, run_osm, InterfaceData};
use optschwarz::symbol::lambda;
use optschwarz::{assemble_t, spectral_radius, OuterBc, ProblemConfig, TransmissionParams};

/// Classical two-subdomain factor with Robin outer data `p`:
/// `|φ(L)/φ(L+δ)|` with `φ(x) = (λ+p)e^{λx} + (λ−p)e^{−λx}`.
fn classical_factor(k: f64, p: f64, cfg: &ProblemConfig) -> f64 {
    let lam = lambda(k, cfg);
    let phi = |x: f64| (lam + p) * (lam * x).exp() + (lam - p) * (-lam * x).exp();
    (phi(cfg.width) / phi(cfg.width + cfg.overlap)).norm()
}

#[test]
fn large_robin_parameter_reproduces_classical_schwarz() {
    let cfg = ProblemConfig::default().with_overlap(0.2);
    let k1 = std::f64::consts::PI / cfg.height;
    let oracle = classical_factor(k1, 1.0, &cfg);
    let disc = discretize(&cfg, 0.02, &TransmissionParams::Uniform { p: 1e6 }).unwrap();
    let report = run_osm(&disc, 40, 1).unwrap();
    assert!((report.prediction / oracle - 1.0).abs() < 1e-4, "{} vs {oracle}", report.prediction);
    assert!((report.contraction / oracle - 1.0).abs() < 1e-2, "{} vs {oracle}", report.contraction);
}

#[test]
fn prediction_is_the_largest_resolved_mode_factor() {
    let cfg = ProblemConfig::default().with_overlap(0.04);
    let params = TransmissionParams::Uniform { p: 5.0 };
    let disc = discretize(&cfg, 0.02, &params).unwrap();
    let report = run_osm(&disc, 30, 2).unwrap();
    let oracle = (1..50)
        .map(|m| {
            let k = m as f64 * std::f64::consts::PI / cfg.height;
            spectral_radius(&assemble_t(k, &params, &cfg).unwrap().entries).unwrap()
        })
        .fold(0.0, f64::max);
    assert!((report.prediction - oracle).abs() <= 1e-12 * oracle);
}

#[test]
fn highest_mode_contracts_faster_than_the_lowest() {
    let cfg = ProblemConfig::default().with_overlap(0.04);
    let disc = discretize(&cfg, 0.01, &TransmissionParams::Uniform { p: 5.878 }).unwrap();
    let rates = modewise_rates(&disc, &[1, 99], 30).unwrap();
    assert!(rates[1].measured < rates[0].measured, "{rates:?}");
    assert!((rates[0].measured / rates[0].predicted - 1.0).abs() < 0.02, "{rates:?}");
}

#[test]
fn mixed_modes_contract_at_the_slower_rate() {
    let cfg = ProblemConfig::default().with_overlap(0.04);
    let disc = discretize(&cfg, 0.01, &TransmissionParams::Uniform { p: 5.878 }).unwrap();
    let rates = modewise_rates(&disc, &[1, 3], 40).unwrap();
    let slower = rates.iter().map(|r| r.measured).fold(0.0, f64::max);
    let joint = run_from(&disc, &InterfaceData::modes(&disc, &[1, 3]), 40).unwrap();
    assert!((joint.contraction / slower - 1.0).abs() < 0.05, "{} vs {slower}", joint.contraction);
}

#[test]
fn dirichlet_outer_data_converges() {
    let cfg = ProblemConfig::default()
        .with_subdomains(3)
        .with_overlap(0.04)
        .with_outer(OuterBc::Dirichlet);
    let disc = discretize(&cfg, 0.02, &TransmissionParams::Uniform { p: 6.0 }).unwrap();
    let report = run_osm(&disc, 40, 4).unwrap();
    assert!(report.contraction < 1.0);
    assert!(report.relative_gap < 0.1, "{report:?}");
}
