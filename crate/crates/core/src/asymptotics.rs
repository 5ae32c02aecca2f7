//! Closed-form constants, small-overlap predictions of the optimized
//! parameters, the limiting-spectrum bound for many subdomains, and
//! power-law fitting used to check the predicted exponents.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{OuterBc, ParamVariant, ProblemConfig, TransmissionParams};
use crate::error::{Error, Result};
use crate::optimizer::{optimize, OptimizationResult};
use crate::search::SearchPolicy;
use crate::symbol::{lambda, shift, sqrt_positive};

fn s_of(cfg: &ProblemConfig) -> Complex64 {
    sqrt_positive(shift(cfg))
}

/// Two subdomains with Robin outer data `p_a`, `p_b`.
pub fn constant_two_sub_robin(cfg: &ProblemConfig) -> Result<f64> {
    let OuterBc::Robin { p_a, p_b } = cfg.outer else {
        return Err(Error::InvalidConfig("constant_two_sub_robin needs Robin outer data".into()));
    };
    let s = s_of(cfg);
    let e2 = (-2.0 * s * cfg.width).exp();
    let e4 = e2 * e2;
    let num = s * ((p_b + s) * (p_a + s) - (s - p_b) * (s - p_a) * e4);
    let den = ((s - p_a) * e2 + s + p_a) * ((s - p_b) * e2 + s + p_b);
    Ok((num / den).re)
}

/// Two subdomains, Dirichlet outer data: `Re s(1 + e^{2sL})/(e^{2sL} − 1)`.
pub fn constant_two_sub_dirichlet(cfg: &ProblemConfig) -> f64 {
    let s = s_of(cfg);
    let e2 = (-2.0 * s * cfg.width).exp();
    (s * (1.0 + e2) / (1.0 - e2)).re
}

/// Three subdomains, Dirichlet outer data: `Re s(e^{2sL} − e^{sL} + 1)/(e^{2sL} − 1)`.
pub fn constant_three_sub_dirichlet(cfg: &ProblemConfig) -> f64 {
    let s = s_of(cfg);
    let e1 = (-s * cfg.width).exp();
    let e2 = e1 * e1;
    (s * (1.0 - e1 + e2) / (1.0 - e2)).re
}

/// Many subdomains (limiting spectrum): `Re s(1 − e^{−sL})/(1 + e^{−sL})`.
pub fn constant_many_sub(cfg: &ProblemConfig) -> f64 {
    let s = s_of(cfg);
    let e1 = (-s * cfg.width).exp();
    (s * (1.0 - e1) / (1.0 + e1)).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticVariant {
    TwoSubRobin,
    TwoSubDirichlet,
    ThreeSubDirichlet,
    ManySub,
}

impl AsymptoticVariant {
    pub const ALL: [AsymptoticVariant; 4] = [
        AsymptoticVariant::TwoSubRobin,
        AsymptoticVariant::TwoSubDirichlet,
        AsymptoticVariant::ThreeSubDirichlet,
        AsymptoticVariant::ManySub,
    ];

    pub fn constant(&self, cfg: &ProblemConfig) -> Result<f64> {
        match self {
            AsymptoticVariant::TwoSubRobin => constant_two_sub_robin(cfg),
            AsymptoticVariant::TwoSubDirichlet => Ok(constant_two_sub_dirichlet(cfg)),
            AsymptoticVariant::ThreeSubDirichlet => Ok(constant_three_sub_dirichlet(cfg)),
            AsymptoticVariant::ManySub => Ok(constant_many_sub(cfg)),
        }
    }

    /// The variant whose constant describes `cfg` (`None` for J = 3 with
    /// Robin outer data, whose constant is only available numerically).
    pub fn for_config(cfg: &ProblemConfig) -> Option<AsymptoticVariant> {
        match (cfg.subdomains, cfg.outer) {
            (2, OuterBc::Robin { .. }) => Some(AsymptoticVariant::TwoSubRobin),
            (2, OuterBc::Dirichlet) => Some(AsymptoticVariant::TwoSubDirichlet),
            (3, OuterBc::Dirichlet) => Some(AsymptoticVariant::ThreeSubDirichlet),
            (3, OuterBc::Robin { .. }) => None,
            _ => Some(AsymptoticVariant::ManySub),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterRule {
    OneParam,
    TwoParam,
}

/// Leading-order constants of the small-overlap expansion: parameters
/// `C_p δ^{-1/3}` (or `C_{p1} δ^{-3/5}`, `C_{p2} δ^{-1/5}`), interior maxima
/// `C_k δ^{-2/3}` (or `C_{k1} δ^{-2/5}`, `C_{k2} δ^{-4/5}`) and `1 − ρ ≈ C_R δ^{1/3}`
/// (or `C_R δ^{1/5}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConstants {
    pub c_p: Option<f64>,
    pub c_k: Option<f64>,
    pub c_p1: Option<f64>,
    pub c_p2: Option<f64>,
    pub c_k1: Option<f64>,
    pub c_k2: Option<f64>,
    pub c_r: f64,
}

/// Small-overlap prediction at one δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub overlap: f64,
    pub params: TransmissionParams,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub constant_c: f64,
    pub variant: AsymptoticVariant,
    pub rule: ParameterRule,
}

impl AsymptoticModel {
    pub fn new(cfg: &ProblemConfig, variant: AsymptoticVariant, rule: ParameterRule) -> Result<Self> {
        let constant_c = variant.constant(cfg)?;
        if !(constant_c > 0.0) || !constant_c.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "asymptotic constant must be positive, got {constant_c}"
            )));
        }
        Ok(Self {
            constant_c,
            variant,
            rule,
        })
    }

    pub fn expansion(&self) -> ExpansionConstants {
        let c = self.constant_c;
        match (self.rule, self.variant) {
            (ParameterRule::OneParam, _) => {
                let c_k = 2f64.cbrt() * c.cbrt();
                ExpansionConstants {
                    c_p: Some(c_k * c_k / 2.0),
                    c_k: Some(c_k),
                    c_p1: None,
                    c_p2: None,
                    c_k1: None,
                    c_k2: None,
                    c_r: 2.0 * c_k,
                }
            }
            (ParameterRule::TwoParam, variant) => {
                let c_k2 = if variant == AsymptoticVariant::ManySub {
                    c.powf(0.2)
                } else {
                    (c / 2.0).powf(0.2)
                };
                ExpansionConstants {
                    c_p: None,
                    c_k: None,
                    c_p1: Some(c_k2 * c_k2),
                    c_p2: Some(c_k2.powi(4)),
                    c_k1: Some(c_k2.powi(3)),
                    c_k2: Some(c_k2),
                    c_r: 2.0 * c_k2,
                }
            }
        }
    }

    pub fn predict(&self, overlap: f64) -> Result<Prediction> {
        match self.rule {
            ParameterRule::OneParam => {
                let (p, rho) = predict_one_param(self.constant_c, overlap)?;
                Ok(Prediction {
                    overlap,
                    params: TransmissionParams::Uniform { p },
                    rho,
                })
            }
            ParameterRule::TwoParam => {
                let two = predict_two_param(self.constant_c, overlap, self.variant)?;
                Ok(Prediction {
                    overlap,
                    params: TransmissionParams::TwoSided {
                        p_minus: two.p_small,
                        p_plus: two.p_large,
                    },
                    rho: two.rho,
                })
            }
        }
    }
}

fn check_positive(c: f64, overlap: f64) -> Result<()> {
    if c > 0.0 && overlap > 0.0 && c.is_finite() && overlap.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "predictions need C > 0 and delta > 0, got C = {c}, delta = {overlap}"
        )))
    }
}

/// `p = 2^{−1/3} C^{2/3} δ^{−1/3}`, `ρ = 1 − 2·2^{1/3} C^{1/3} δ^{1/3}`.
pub fn predict_one_param(c: f64, overlap: f64) -> Result<(f64, f64)> {
    check_positive(c, overlap)?;
    let p = 2f64.powf(-1.0 / 3.0) * c.powf(2.0 / 3.0) * overlap.powf(-1.0 / 3.0);
    let rho = 1.0 - 2.0 * 2f64.cbrt() * c.cbrt() * overlap.cbrt();
    Ok((p, rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoParamPrediction {
    /// The `δ^{−3/5}` parameter.
    pub p_large: f64,
    /// The `δ^{−1/5}` parameter.
    pub p_small: f64,
    pub rho: f64,
}

/// Two-parameter rule. The two- and three-subdomain variants carry the
/// `2^{−2/5}`, `2^{−4/5}`, `2^{−1/5}` prefactors; the many-subdomain
/// variant does not.
pub fn predict_two_param(c: f64, overlap: f64, variant: AsymptoticVariant) -> Result<TwoParamPrediction> {
    check_positive(c, overlap)?;
    let (f_large, f_small, f_rho) = match variant {
        AsymptoticVariant::ManySub => (1.0, 1.0, 1.0),
        _ => (2f64.powf(-0.4), 2f64.powf(-0.8), 2f64.powf(-0.2)),
    };
    Ok(TwoParamPrediction {
        p_large: f_large * c.powf(0.4) * overlap.powf(-0.6),
        p_small: f_small * c.powf(0.8) * overlap.powf(-0.2),
        rho: 1.0 - 2.0 * f_rho * c.powf(0.2) * overlap.powf(0.2),
    })
}

/// `(α, β_−, β_+)` of the infinite block-Toeplitz operator with all left
/// parameters `p^−` and all right parameters `p^+`, each ratio scaled by
/// `e^{−λ(L+δ)}` and every factor `λ ± p` normalised by `1 + p`.
pub fn toeplitz_symbols(
    k: f64,
    p_minus: f64,
    p_plus: f64,
    cfg: &ProblemConfig,
) -> Result<(Complex64, Complex64, Complex64)> {
    let lam = lambda(k, cfg);
    let (mw, pw) = (1.0 + p_minus, 1.0 + p_plus);
    let (mp, mm) = ((lam + p_minus) / mw, (lam - p_minus) / mw);
    let (pp, pm) = ((lam + p_plus) / pw, (lam - p_plus) / pw);
    let decay = |x: f64| (-lam * x).exp();
    let (l, d) = (cfg.width, cfg.overlap);
    let den = pp * mp - pm * mm * decay(2.0 * (l + d));
    if !(den.norm() > 1e-280) {
        return Err(Error::DenominatorUnderflow { k, magnitude: den.norm() });
    }
    let alpha = (pp * mp * decay(l) - pm * mm * decay(l + 2.0 * d)) / den;
    let tail = decay(2.0 * l + d) - decay(d);
    let beta_minus = mp * mm * tail / den * (mw / pw);
    let beta_plus = pp * pm * tail / den * (pw / mw);
    Ok((alpha, beta_minus, beta_plus))
}

/// Limiting-spectrum bound `max{|α − √(β_− β_+)|, |α + √(β_− β_+)|}` at frequency `k`.
pub fn limiting_bound(k: f64, params: &TransmissionParams, cfg: &ProblemConfig) -> Result<f64> {
    let (p_minus, p_plus) = match *params {
        TransmissionParams::Uniform { p } => (p, p),
        TransmissionParams::TwoSided { p_minus, p_plus } => (p_minus, p_plus),
        TransmissionParams::Full { .. } => {
            return Err(Error::InvalidParams(
                "the limiting bound needs uniform or two-sided parameters".into(),
            ))
        }
    };
    params.validate(cfg.subdomains.max(2))?;
    let (alpha, beta_minus, beta_plus) = toeplitz_symbols(k, p_minus, p_plus, cfg)?;
    let root = if p_minus == p_plus {
        beta_minus
    } else {
        sqrt_positive(beta_minus * beta_plus)
    };
    Ok((alpha - root).norm().max((alpha + root).norm()))
}

/// Least-squares power law `value ≈ prefactor · δ^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub prefactor: f64,
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    if let Some(&(d, v)) = samples.iter().find(|(d, v)| !(*d > 0.0 && *v > 0.0)) {
        return Err(Error::DegenerateFit(format!(
            "samples must be positive, got ({d}, {v})"
        )));
    }
    let mut ds: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ds.sort_by(f64::total_cmp);
    if ds.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateFit("overlap values must be distinct".into()));
    }
    if ds[ds.len() - 1] / ds[0] < 10.0 {
        return Err(Error::DegenerateFit("samples span less than one decade".into()));
    }
    Ok(())
}

pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<AsymptoticFit> {
    check_samples(samples)?;
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let exponent = sxy / sxx;
    Ok(AsymptoticFit {
        samples: samples.to_vec(),
        exponent,
        prefactor: (my - exponent * mx).exp(),
    })
}

/// Prefactor `C_R` of `1 − ρ = C_R δ^{1/3} + D δ^{2/3}` by linear least squares.
pub fn leading_coefficient_one_third(samples: &[(f64, f64)]) -> Result<f64> {
    check_samples(samples)?;
    // normal equations for [δ^{1/3}, δ^{2/3}] . [C_R, D] = value
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(d, v) in samples {
        let (u, w) = (d.cbrt(), d.cbrt().powi(2));
        a11 += u * u;
        a12 += u * w;
        a22 += w * w;
        b1 += u * v;
        b2 += w * v;
    }
    let det = a11 * a22 - a12 * a12;
    Ok((b1 * a22 - b2 * a12) / det)
}

/// Invert `1 − ρ = 2·2^{1/3} C^{1/3} δ^{1/3}` for `C` given `C_R`.
pub fn constant_from_rate(c_r: f64) -> f64 {
    (c_r / 2.0).powi(3) / 2.0
}

/// Constant `C` recovered from `(δ, 1 − ρ*)` samples of uniform optima.
pub fn constant_from_samples(samples: &[(f64, f64)]) -> Result<f64> {
    let fit = fit_power_law(samples)?;
    let expected = 1.0 / 3.0;
    let tolerance = 0.05;
    if (fit.exponent - expected).abs() > tolerance {
        return Err(Error::FitRejected {
            exponent: fit.exponent,
            expected,
            tolerance,
        });
    }
    Ok(constant_from_rate(leading_coefficient_one_third(samples)?))
}

/// Default overlap sweep used by the fits.
pub const DEFAULT_SWEEP: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

/// Three-subdomain constant extracted from numerically optimized uniform
/// parameters at the given overlaps.
pub fn three_sub_constant_solve(cfg: &ProblemConfig, overlaps: &[f64], policy: &SearchPolicy) -> Result<f64> {
    let cfg = cfg.with_subdomains(3);
    let samples = overlaps
        .iter()
        .map(|&d| {
            let res = optimize(&cfg.with_overlap(d), ParamVariant::Uniform, policy)?;
            Ok((d, 1.0 - res.rho_star))
        })
        .collect::<Result<Vec<_>>>()?;
    constant_from_samples(&samples)
}

/// One δ of a predicted-vs-optimized sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub overlap: f64,
    pub predicted: Option<Prediction>,
    pub optimized: OptimizationResult,
}

/// Optimizes at each overlap and pairs the result with the small-overlap
/// prediction of `model` (when given).
pub fn sweep(
    cfg: &ProblemConfig,
    variant: ParamVariant,
    overlaps: &[f64],
    model: Option<&AsymptoticModel>,
    policy: &SearchPolicy,
) -> Result<Vec<SweepPoint>> {
    overlaps
        .par_iter()
        .map(|&d| {
            let optimized = optimize(&cfg.with_overlap(d), variant, policy)?;
            let predicted = model.map(|m| m.predict(d)).transpose()?;
            Ok(SweepPoint {
                overlap: d,
                predicted,
                optimized,
            })
        })
        .collect()
}

/// Fitted exponents of `1 − ρ*(δ)` and of each optimized parameter, the
/// parameters being sorted by size at every δ so that the two orientations
/// of a two-sided optimum fit together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepExponents {
    pub rate: AsymptoticFit,
    pub params: Vec<AsymptoticFit>,
}

pub fn sweep_exponents(points: &[SweepPoint]) -> Result<SweepExponents> {
    let rate = fit_power_law(
        &points
            .iter()
            .map(|p| (p.overlap, 1.0 - p.optimized.rho_star))
            .collect::<Vec<_>>(),
    )?;
    let width = points.first().map(|p| p.optimized.params.as_vec().len()).unwrap_or(0);
    let sorted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut v = p.optimized.params.as_vec();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    let params = (0..width)
        .map(|i| {
            fit_power_law(
                &points
                    .iter()
                    .zip(&sorted)
                    .map(|(p, v)| (p.overlap, v[i]))
                    .collect::<Vec<_>>(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepExponents { rate, params })
}
