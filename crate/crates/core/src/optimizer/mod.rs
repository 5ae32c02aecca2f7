//! Min-max optimization of the Robin transmission parameters:
//! `min_p max_k ρ(T(k, p))`.
//!
//! The outer search runs Nelder–Mead in `ln p` from several starts (the
//! small-overlap predictions, the optimum of the next-poorer parameter
//! family, and seeded random log-uniform points), then polishes the best
//! point with restarts. The inner maximum is [`crate::search::rho_max_with`].

mod nelder_mead;

pub use nelder_mead::{minimize, SimplexOutcome, SimplexSettings};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{AsymptoticModel, AsymptoticVariant, ParameterRule};
use crate::closed::ConvergenceFactor;
use crate::config::{OuterBc, ParamVariant, ProblemConfig, TransmissionParams};
use crate::error::{Error, Result};
use crate::search::{rho_max_with, LocalMax, RhoMax, SearchPolicy};

/// A local maximum counts as active when within this fraction of `ρ*`.
pub const ACTIVE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub params: TransmissionParams,
    pub rho_star: f64,
    /// Every local maximum of `ρ(k)` at the solution.
    pub maxima: Vec<LocalMax>,
    /// `max |ρ(k_i) − ρ(k_j)|` over the maxima the variant is expected to
    /// equalise; `None` when fewer local maxima exist.
    pub equioscillation_residual: Option<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptimizationResult {
    pub fn variant(&self) -> ParamVariant {
        self.params.variant()
    }

    /// Maxima within [`ACTIVE_THRESHOLD`] of `ρ*`.
    pub fn active_maxima(&self) -> Vec<LocalMax> {
        self.maxima
            .iter()
            .copied()
            .filter(|m| m.rho >= self.rho_star * (1.0 - ACTIVE_THRESHOLD))
            .collect()
    }

    /// Converts a budget-exhausted run into [`Error::NotConverged`].
    pub fn ensure_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                evaluations: self.evaluations,
                rho_star: self.rho_star,
            })
        }
    }
}

/// Number of equal maxima expected at an optimum of each family.
pub fn expected_maxima(variant: ParamVariant) -> usize {
    match variant {
        ParamVariant::Uniform => 2,
        ParamVariant::TwoSided | ParamVariant::Full => 3,
    }
}

fn residual_of(maxima: &[LocalMax], required: usize) -> Option<f64> {
    if maxima.len() < required {
        return None;
    }
    let rm = RhoMax {
        rho_star: 0.0,
        maxima: maxima.to_vec(),
    };
    let top = rm.top(required);
    let hi = top.iter().map(|m| m.rho).fold(f64::NEG_INFINITY, f64::max);
    let lo = top.iter().map(|m| m.rho).fold(f64::INFINITY, f64::min);
    Some(hi - lo)
}

/// Spread of the `expected_maxima` largest maxima at the solution.
pub fn equioscillation_check(result: &OptimizationResult) -> Result<f64> {
    let required = expected_maxima(result.variant());
    residual_of(&result.maxima, required).ok_or(Error::TooFewMaxima {
        found: result.maxima.len(),
        required,
    })
}

fn to_log(p: &[f64]) -> Vec<f64> {
    p.iter().map(|v| v.ln()).collect()
}

fn from_log(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.exp()).collect()
}

/// Evaluates `max_k ρ` for a parameter vector of the given family.
struct Objective<'a> {
    cfg: &'a ProblemConfig,
    variant: ParamVariant,
    policy: &'a SearchPolicy,
}

impl Objective<'_> {
    fn params(&self, p: &[f64]) -> TransmissionParams {
        TransmissionParams::from_vec(self.variant, p)
    }

    fn full(&self, p: &[f64]) -> Result<RhoMax> {
        let evaluator = ConvergenceFactor::new(&self.params(p), self.cfg)?;
        rho_max_with(&evaluator, self.policy)
    }

    fn value(&self, p: &[f64]) -> f64 {
        self.full(p).map(|r| r.rho_star).unwrap_or(f64::INFINITY)
    }
}

/// Small-overlap predictions for the family, as parameter vectors.
fn asymptotic_seeds(cfg: &ProblemConfig, variant: ParamVariant) -> Vec<Vec<f64>> {
    let mut constants = vec![AsymptoticVariant::ManySub, AsymptoticVariant::TwoSubDirichlet];
    if let Some(v) = AsymptoticVariant::for_config(cfg) {
        constants.insert(0, v);
    }
    if matches!(cfg.outer, OuterBc::Robin { .. }) {
        constants.push(AsymptoticVariant::TwoSubRobin);
    }
    if cfg.subdomains == 3 {
        constants.push(AsymptoticVariant::ThreeSubDirichlet);
    }
    constants.dedup();

    let mut seeds = Vec::new();
    for c in constants {
        let rule = match variant {
            ParamVariant::Uniform => ParameterRule::OneParam,
            _ => ParameterRule::TwoParam,
        };
        let Ok(model) = AsymptoticModel::new(cfg, c, rule) else {
            continue;
        };
        let Ok(pred) = model.predict(cfg.overlap) else {
            continue;
        };
        match (variant, &pred.params) {
            (ParamVariant::Uniform, p) => seeds.push(p.as_vec()),
            (ParamVariant::TwoSided, TransmissionParams::TwoSided { p_minus, p_plus }) => {
                seeds.push(vec![*p_minus, *p_plus]);
                seeds.push(vec![*p_plus, *p_minus]);
            }
            (ParamVariant::Full, p) => seeds.push(p.to_full(cfg.subdomains).as_vec()),
            _ => {}
        }
    }
    seeds
}

fn settings_for(policy: &SearchPolicy, step: f64, budget: usize) -> SimplexSettings {
    SimplexSettings {
        step,
        f_tolerance: policy.rho_tolerance,
        x_tolerance: 1e-9,
        max_evaluations: budget,
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    x: Vec<f64>,
    f: f64,
    evaluations: usize,
    converged: bool,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    match a.f.total_cmp(&b.f) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.x.iter().zip(&b.x).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne())
            == Some(std::cmp::Ordering::Less),
    }
}

/// Nelder–Mead from `start`, restarted from its own result until a restart
/// no longer improves by more than the tolerance.
fn polish(objective: &Objective<'_>, start: Candidate, policy: &SearchPolicy, log_bounds: (f64, f64)) -> Candidate {
    let mut current = start;
    let mut step = 0.2;
    let mut budget_left = policy.max_evaluations;
    for _ in 0..8 {
        if budget_left == 0 {
            break;
        }
        let mut f = |x: &[f64]| objective.value(&from_log(x));
        let out = minimize(&mut f, &current.x, log_bounds, settings_for(policy, step, budget_left));
        budget_left = budget_left.saturating_sub(out.evaluations);
        let improved = current.f - out.f;
        let next = Candidate {
            x: out.x,
            f: out.f,
            evaluations: current.evaluations + out.evaluations,
            converged: out.converged,
        };
        let stop = improved <= policy.rho_tolerance && out.converged;
        current = if better(&next, &current) {
            next
        } else {
            Candidate {
                evaluations: next.evaluations,
                converged: next.converged,
                ..current
            }
        };
        if stop {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    current
}

/// Solves the min-max problem for one parameter family.
pub fn optimize(cfg: &ProblemConfig, variant: ParamVariant, policy: &SearchPolicy) -> Result<OptimizationResult> {
    optimize_seeded(cfg, variant, policy, &[])
}

/// As [`optimize`], with extra starting points (each a parameter vector of the family).
pub fn optimize_seeded(
    cfg: &ProblemConfig,
    variant: ParamVariant,
    policy: &SearchPolicy,
    extra_seeds: &[Vec<f64>],
) -> Result<OptimizationResult> {
    cfg.validate()?;
    policy.validate()?;
    if !(cfg.overlap > 0.0) {
        return Err(Error::InvalidConfig("optimization needs a positive overlap".into()));
    }
    let dim = TransmissionParams::dimension(variant, cfg.subdomains);
    if let Some(bad) = extra_seeds.iter().find(|s| s.len() != dim) {
        return Err(Error::InvalidParams(format!(
            "seed of length {} for a {dim}-parameter family",
            bad.len()
        )));
    }
    let objective = Objective { cfg, variant, policy };
    let log_bounds = (policy.param_bounds.0.ln(), policy.param_bounds.1.ln());

    let mut seeds: Vec<Vec<f64>> = extra_seeds.to_vec();
    let mut inherited_evaluations = 0;
    // the optimum of the next-poorer family, so richer families never do worse
    let poorer = match variant {
        ParamVariant::Uniform => None,
        ParamVariant::TwoSided => Some(ParamVariant::Uniform),
        ParamVariant::Full => Some(ParamVariant::TwoSided),
    };
    if let Some(poorer) = poorer {
        let sub = optimize(cfg, poorer, policy)?;
        inherited_evaluations += sub.evaluations;
        let p = sub.params;
        seeds.push(match variant {
            ParamVariant::TwoSided => {
                let v = p.as_vec()[0];
                vec![v, v]
            }
            _ => p.to_full(cfg.subdomains).as_vec(),
        });
    }
    seeds.extend(asymptotic_seeds(cfg, variant));
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed ^ ((cfg.subdomains as u64) << 32) ^ dim as u64);
    for _ in 0..policy.multistart {
        seeds.push(
            (0..dim)
                .map(|_| rng.random_range(log_bounds.0..log_bounds.1).exp())
                .collect(),
        );
    }

    // screening pass from every start, then a full polish of the best
    let screen_budget = (policy.max_evaluations / 4).max(50 * (dim + 1));
    let screened: Vec<Candidate> = seeds
        .par_iter()
        .map(|seed| {
            let x0: Vec<f64> = to_log(seed)
                .into_iter()
                .map(|v| v.clamp(log_bounds.0, log_bounds.1))
                .collect();
            let mut f = |x: &[f64]| objective.value(&from_log(x));
            let out = minimize(&mut f, &x0, log_bounds, settings_for(policy, 0.5, screen_budget));
            Candidate {
                x: out.x,
                f: out.f,
                evaluations: out.evaluations,
                converged: out.converged,
            }
        })
        .collect();
    let screening_evaluations: usize = screened.iter().map(|c| c.evaluations).sum();
    let best = screened
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .ok_or_else(|| Error::Solver("no starting points".into()))?;
    let polished = polish(&objective, Candidate { evaluations: 0, ..best }, policy, log_bounds);

    let p = from_log(&polished.x);
    let inner = objective.full(&p)?;
    let params = objective.params(&p);
    let required = expected_maxima(variant);
    Ok(OptimizationResult {
        params,
        rho_star: inner.rho_star,
        equioscillation_residual: residual_of(&inner.maxima, required),
        maxima: inner.maxima,
        evaluations: inherited_evaluations + screening_evaluations + polished.evaluations,
        converged: polished.converged,
    })
}

/// Exhaustive minimiser of `max_k ρ` over an explicit list of parameter vectors.
pub fn brute_force_minmax(
    cfg: &ProblemConfig,
    variant: ParamVariant,
    grid: &[Vec<f64>],
    policy: &SearchPolicy,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty parameter grid".into()));
    }
    let objective = Objective { cfg, variant, policy };
    let values: Vec<f64> = grid.par_iter().map(|p| objective.value(p)).collect();
    let mut best = 0;
    for i in 1..grid.len() {
        let a = Candidate {
            x: grid[i].clone(),
            f: values[i],
            evaluations: 0,
            converged: true,
        };
        let b = Candidate {
            x: grid[best].clone(),
            f: values[best],
            evaluations: 0,
            converged: true,
        };
        if better(&a, &b) {
            best = i;
        }
    }
    let inner = objective.full(&grid[best])?;
    Ok(OptimizationResult {
        params: objective.params(&grid[best]),
        rho_star: inner.rho_star,
        equioscillation_residual: residual_of(&inner.maxima, expected_maxima(variant)),
        maxima: inner.maxima,
        evaluations: grid.len(),
        converged: true,
    })
}

/// `n` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchPolicy {
        SearchPolicy {
            multistart: 2,
            ..SearchPolicy::default()
        }
    }

    #[test]
    fn brute_force_single_point() {
        let cfg = ProblemConfig::default();
        let r = brute_force_minmax(&cfg, ParamVariant::Uniform, &[vec![2.0]], &quick()).unwrap();
        assert_eq!(r.params, TransmissionParams::Uniform { p: 2.0 });
        assert!(r.rho_star > 0.0 && r.rho_star < 1.0);
    }

    #[test]
    fn residual_needs_enough_maxima() {
        let r = OptimizationResult {
            params: TransmissionParams::Uniform { p: 1.0 },
            rho_star: 0.5,
            maxima: vec![LocalMax { k: 0.0, rho: 0.5 }],
            equioscillation_residual: None,
            evaluations: 1,
            converged: true,
        };
        assert!(matches!(
            equioscillation_check(&r),
            Err(Error::TooFewMaxima { found: 1, required: 2 })
        ));
        assert!(r.clone().ensure_converged().is_ok());
        let r = OptimizationResult { converged: false, ..r };
        assert!(matches!(r.ensure_converged(), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn seeds_have_family_dimension() {
        let cfg = ProblemConfig::default().with_subdomains(4);
        for v in [ParamVariant::Uniform, ParamVariant::TwoSided, ParamVariant::Full] {
            let d = TransmissionParams::dimension(v, 4);
            let seeds = asymptotic_seeds(&cfg, v);
            assert!(!seeds.is_empty());
            assert!(seeds.iter().all(|s| s.len() == d && s.iter().all(|p| *p > 0.0)));
        }
    }

    #[test]
    fn uniform_two_subdomains_beats_brute_force_grid() {
        let cfg = ProblemConfig::default();
        let policy = quick();
        let opt = optimize(&cfg, ParamVariant::Uniform, &policy).unwrap();
        let grid: Vec<Vec<f64>> = log_grid(0.1, 100.0, 200).into_iter().map(|p| vec![p]).collect();
        let brute = brute_force_minmax(&cfg, ParamVariant::Uniform, &grid, &policy).unwrap();
        assert!(opt.rho_star <= brute.rho_star + 1e-12);
        // grid spacing is ~3.5% in p; the kink makes ρ* Lipschitz in ln p
        assert!(brute.rho_star - opt.rho_star < 2e-2);
        let with_opt: Vec<Vec<f64>> = grid.into_iter().chain([opt.params.as_vec()]).collect();
        let dominated = brute_force_minmax(&cfg, ParamVariant::Uniform, &with_opt, &policy).unwrap();
        assert!(dominated.rho_star <= opt.rho_star + 1e-12);
    }

    #[test]
    fn rejects_bad_seed_length() {
        let cfg = ProblemConfig::default();
        let e = optimize_seeded(&cfg, ParamVariant::TwoSided, &quick(), &[vec![1.0]]);
        assert!(matches!(e, Err(Error::InvalidParams(_))));
    }
}
