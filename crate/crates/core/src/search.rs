//! Inner maximisation of `ρ(k)` over frequencies `k ∈ [k_min, ∞)`.

use serde::{Deserialize, Serialize};

use crate::closed::ConvergenceFactor;
use crate::config::{ProblemConfig, TransmissionParams};
use crate::error::{Error, Result};

/// Knobs for both the frequency search and the outer parameter search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchPolicy {
    /// Number of log-spaced samples in the coarse frequency scan.
    pub coarse_points: usize,
    /// Lower end of the log scan (the scan always also samples `k_min`).
    pub k_floor: f64,
    /// Upper end of the log scan; raised to `k_decay / δ` when that is larger.
    pub k_ceiling: f64,
    /// Controls the overlap-dependent upper end: `ρ(k)` has decayed like
    /// `e^{−kδ}` long before `k = k_decay / δ`.
    pub k_decay: f64,
    /// Relative tolerance on the location of each refined local maximum.
    pub k_tolerance: f64,
    /// Number of random log-uniform starting points in the outer search.
    pub multistart: usize,
    /// Box for every Robin parameter.
    pub param_bounds: (f64, f64),
    /// Convergence tolerance on `ρ*` in the outer search.
    pub rho_tolerance: f64,
    /// Outer search evaluation budget per start.
    pub max_evaluations: usize,
    /// Seed for the multistart generator.
    pub seed: u64,
    /// Lower end of the frequency interval.
    pub k_min: f64,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        Self {
            coarse_points: 200,
            k_floor: 1e-3,
            k_ceiling: 1e6,
            k_decay: 40.0,
            k_tolerance: 1e-10,
            multistart: 8,
            param_bounds: (1e-3, 1e6),
            rho_tolerance: 1e-8,
            max_evaluations: 4000,
            seed: 0x05c4_a12c,
            k_min: 0.0,
        }
    }
}

impl SearchPolicy {
    pub fn validate(&self) -> Result<()> {
        let ok = self.coarse_points >= 3
            && self.k_floor > 0.0
            && self.k_ceiling > self.k_floor
            && self.k_decay > 0.0
            && self.k_tolerance > 0.0
            && self.rho_tolerance > 0.0
            && self.param_bounds.0 > 0.0
            && self.param_bounds.1 > self.param_bounds.0
            && self.max_evaluations > 0
            && self.k_min >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid search policy: {self:?}")))
        }
    }

    /// Upper end of the frequency scan for overlap `δ`.
    pub fn upper_frequency(&self, overlap: f64) -> f64 {
        if overlap > 0.0 {
            self.k_ceiling.max(self.k_decay / overlap)
        } else {
            self.k_ceiling
        }
    }
}

/// A local maximum of `ρ(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMax {
    pub k: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoMax {
    pub rho_star: f64,
    /// All local maxima found, ordered by `k`; the boundary `k_min` is
    /// included whenever `ρ` decreases away from it.
    pub maxima: Vec<LocalMax>,
}

impl RhoMax {
    /// Maxima within `rel · ρ*` of the global maximum.
    pub fn active(&self, rel: f64) -> Vec<LocalMax> {
        self.maxima
            .iter()
            .copied()
            .filter(|m| m.rho >= self.rho_star * (1.0 - rel))
            .collect()
    }

    /// The `n` largest maxima, ordered by `k`.
    pub fn top(&self, n: usize) -> Vec<LocalMax> {
        let mut sorted = self.maxima.clone();
        sorted.sort_by(|a, b| b.rho.total_cmp(&a.rho).then(a.k.total_cmp(&b.k)));
        sorted.truncate(n);
        sorted.sort_by(|a, b| a.k.total_cmp(&b.k));
        sorted
    }
}

/// Frequencies sampled by the coarse scan: `k_min` followed by log-spaced points.
pub fn scan_grid(policy: &SearchPolicy, overlap: f64) -> Vec<f64> {
    let lo = policy.k_min.max(policy.k_floor);
    let hi = policy.upper_frequency(overlap);
    let n = policy.coarse_points;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut ks = Vec::with_capacity(n + 1);
    if policy.k_min < lo {
        ks.push(policy.k_min);
    }
    ks.extend((0..n).map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()));
    ks
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximisation on `[lo, hi]`, in `ln k` when `lo > 0`.
fn golden_max(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<LocalMax> {
    let log_space = lo > 0.0;
    let (to, from): (fn(f64) -> f64, fn(f64) -> f64) = if log_space {
        (f64::ln, f64::exp)
    } else {
        (|x| x, |x| x)
    };
    let (mut a, mut b) = (to(lo), to(hi));
    let g = |t: f64| f(from(t));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c)?;
    let mut fd = g(d)?;
    let scale = if log_space { 1.0 } else { hi.max(f64::MIN_POSITIVE) };
    while (b - a) > tol * scale {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d)?;
        }
    }
    let (t, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(LocalMax { k: from(t), rho: v })
}

/// Global maximum of `ρ(k)` over `[k_min, ∞)` with every local maximum found.
pub fn rho_max_with(evaluator: &ConvergenceFactor<'_>, policy: &SearchPolicy) -> Result<RhoMax> {
    let overlap = evaluator.config().overlap;
    let ks = scan_grid(policy, overlap);
    let vals = ks
        .iter()
        .map(|&k| evaluator.rho(k))
        .collect::<Result<Vec<_>>>()?;
    let f = |k: f64| evaluator.rho(k);
    let n = ks.len();
    let mut maxima = Vec::new();
    if vals[0] >= vals[1] {
        maxima.push(LocalMax { k: ks[0], rho: vals[0] });
    }
    for i in 1..n - 1 {
        if vals[i] >= vals[i - 1] && vals[i] > vals[i + 1] {
            let refined = golden_max(&f, ks[i - 1], ks[i + 1], policy.k_tolerance)?;
            maxima.push(if refined.rho >= vals[i] {
                refined
            } else {
                LocalMax { k: ks[i], rho: vals[i] }
            });
        }
    }
    if vals[n - 1] > vals[n - 2] {
        maxima.push(LocalMax {
            k: ks[n - 1],
            rho: vals[n - 1],
        });
    }
    let rho_star = maxima.iter().map(|m| m.rho).fold(0.0, f64::max);
    Ok(RhoMax { rho_star, maxima })
}

/// `max_k ρ(T(k))` for the given parameters; `k_min` overrides the policy value.
pub fn rho_max(
    params: &TransmissionParams,
    cfg: &ProblemConfig,
    k_min: f64,
    policy: &SearchPolicy,
) -> Result<RhoMax> {
    if !(cfg.overlap > 0.0) {
        return Err(Error::InvalidConfig(
            "the frequency maximum needs a positive overlap".into(),
        ));
    }
    policy.validate()?;
    let policy = SearchPolicy {
        k_min,
        ..policy.clone()
    };
    policy.validate()?;
    let evaluator = ConvergenceFactor::new(params, cfg)?;
    rho_max_with(&evaluator, &policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_includes_k_min_and_ceiling() {
        let policy = SearchPolicy::default();
        let ks = scan_grid(&policy, 1e-2);
        assert_eq!(ks[0], 0.0);
        assert!((ks[1] - 1e-3).abs() < 1e-15);
        assert!((ks.last().unwrap() - 1e6).abs() < 1e-3);
        let tiny = scan_grid(&policy, 1e-6);
        assert!((tiny.last().unwrap() / 4e7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_peak() {
        let f = |k: f64| Ok(-(k.ln() - 2.0f64.ln()).powi(2));
        let m = golden_max(&f, 0.5, 8.0, 1e-10).unwrap();
        assert!((m.k - 2.0).abs() < 1e-8);
    }

    #[test]
    fn table_configuration_values() {
        let cfg = ProblemConfig::default().with_subdomains(4);
        let policy = SearchPolicy::default();
        let r = rho_max(&TransmissionParams::Uniform { p: 2.8396 }, &cfg, 0.0, &policy).unwrap();
        assert!((r.rho_star - 0.6202).abs() < 5e-4);
        let tail = ConvergenceFactor::new(&TransmissionParams::Uniform { p: 2.8396 }, &cfg).unwrap();
        assert!(tail.rho(1e6).unwrap() < 1e-6);
    }

    #[test]
    fn rejects_zero_overlap() {
        let cfg = ProblemConfig::default().with_overlap(0.0);
        let e = rho_max(&TransmissionParams::Uniform { p: 1.0 }, &cfg, 0.0, &SearchPolicy::default());
        assert!(e.is_err());
    }
}
