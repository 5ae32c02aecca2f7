//! Closed-form convergence factors for two and three subdomains, and the
//! per-frequency evaluator used by the frequency search.

use num_complex::Complex64;

use crate::coeffs::{minus_pair, plus_pair};
use crate::config::{ProblemConfig, ResolvedParams, TransmissionParams};
use crate::error::{Error, Result};
use crate::matrix::{assemble_resolved, spectral_radius};
use crate::symbol::{lambda, sqrt_positive};

fn require_subdomains(cfg: &ProblemConfig, expected: usize) -> Result<()> {
    if cfg.subdomains != expected {
        return Err(Error::InvalidConfig(format!(
            "closed form needs J = {expected}, got J = {}",
            cfg.subdomains
        )));
    }
    Ok(())
}

/// `ρ = √|β_1^+ β_2^−|` for two subdomains.
pub fn rho_two_closed(k: f64, params: &TransmissionParams, cfg: &ProblemConfig) -> Result<f64> {
    require_subdomains(cfg, 2)?;
    cfg.validate()?;
    let resolved = params.resolve(cfg)?;
    two_closed_resolved(k, &resolved, cfg)
}

fn two_closed_resolved(k: f64, resolved: &ResolvedParams, cfg: &ProblemConfig) -> Result<f64> {
    let lam = lambda(k, cfg);
    let (_, beta_plus) = plus_pair(1, lam, resolved, cfg, k)?;
    let (_, beta_minus) = minus_pair(2, lam, resolved, cfg, k)?;
    Ok((beta_plus * beta_minus).norm().sqrt())
}

/// Largest root modulus of the biquadratic `μ⁴ − m_1 μ² + c_0`, where
/// `m_2 = m_1² − 4 c_0` is supplied directly.
pub fn biquadratic_radius(m1: Complex64, m2: Complex64) -> f64 {
    let root = sqrt_positive(m2);
    let mu_sq_1 = (m1 + root) * 0.5;
    let mu_sq_2 = (m1 - root) * 0.5;
    mu_sq_1.norm().sqrt().max(mu_sq_2.norm().sqrt())
}

/// Spectral radius for three subdomains from the characteristic polynomial
/// `μ⁴ − m_1 μ² − α_3^− β_2^− α_1^+ β_2^+ + β_3^− β_2^+ β_2^− β_1^+`.
pub fn rho_three_closed(k: f64, params: &TransmissionParams, cfg: &ProblemConfig) -> Result<f64> {
    require_subdomains(cfg, 3)?;
    cfg.validate()?;
    let resolved = params.resolve(cfg)?;
    three_closed_resolved(k, &resolved, cfg)
}

fn three_closed_resolved(k: f64, resolved: &ResolvedParams, cfg: &ProblemConfig) -> Result<f64> {
    let lam = lambda(k, cfg);
    let (alpha_1p, beta_1p) = plus_pair(1, lam, resolved, cfg, k)?;
    let (_, beta_2p) = plus_pair(2, lam, resolved, cfg, k)?;
    let (_, beta_2m) = minus_pair(2, lam, resolved, cfg, k)?;
    let (alpha_3m, beta_3m) = minus_pair(3, lam, resolved, cfg, k)?;
    let left = beta_2m * beta_1p;
    let right = beta_3m * beta_2p;
    let m1 = left + right;
    let m2 = 4.0 * alpha_3m * beta_2m * alpha_1p * beta_2p + (left - right) * (left - right);
    Ok(biquadratic_radius(m1, m2))
}

/// Evaluates `ρ(k)` for a fixed configuration and parameter set, using the
/// closed forms for `J = 2, 3` and a dense eigenvalue solve otherwise.
#[derive(Debug, Clone)]
pub struct ConvergenceFactor<'a> {
    cfg: &'a ProblemConfig,
    resolved: ResolvedParams,
}

impl<'a> ConvergenceFactor<'a> {
    pub fn new(params: &TransmissionParams, cfg: &'a ProblemConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            resolved: params.resolve(cfg)?,
        })
    }

    pub fn config(&self) -> &ProblemConfig {
        self.cfg
    }

    pub fn rho(&self, k: f64) -> Result<f64> {
        match self.cfg.subdomains {
            2 => two_closed_resolved(k, &self.resolved, self.cfg),
            3 => three_closed_resolved(k, &self.resolved, self.cfg),
            _ => spectral_radius(&assemble_resolved(k, &self.resolved, self.cfg)?),
        }
    }

    /// `ρ(k)` from the dense eigenvalue solve regardless of `J`.
    pub fn rho_dense(&self, k: f64) -> Result<f64> {
        spectral_radius(&assemble_resolved(k, &self.resolved, self.cfg)?)
    }
}
