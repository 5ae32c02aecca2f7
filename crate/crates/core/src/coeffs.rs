//! Interface coefficients `α_j^±`, `β_j^±` of the Robin-trace recurrence.
//!
//! Every ratio is multiplied through by `e^{−λ(L+δ)}` so only decaying
//! exponentials are evaluated, and each factor `λ ± p` is normalised by
//! `1 + p` so that a Dirichlet outer condition is the exact `p → ∞` limit
//! `(λ + p)/(1 + p) → 1`, `(λ − p)/(1 + p) → −1`.

use num_complex::Complex64;

use crate::config::{ProblemConfig, ResolvedParams, Robin, TransmissionParams};
use crate::error::{Error, Result};
use crate::symbol::lambda;

const UNDERFLOW: f64 = 1e-280;

/// Coefficients of one interface recurrence pair. `None` marks a pair that is
/// not defined at the end of the chain (`α_1^−, β_1^−` and `α_J^+, β_J^+`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceCoeffs {
    pub alpha_minus: Option<Complex64>,
    pub beta_minus: Option<Complex64>,
    pub alpha_plus: Option<Complex64>,
    pub beta_plus: Option<Complex64>,
}

/// Normalised factors `((λ + p)/(1 + p), (λ − p)/(1 + p))` and weight `1 + p`.
#[inline]
fn factors(lambda: Complex64, p: Robin) -> (Complex64, Complex64, Option<f64>) {
    match p {
        Robin::Finite(p) => {
            let w = 1.0 + p;
            ((lambda + p) / w, (lambda - p) / w, Some(w))
        }
        Robin::Dirichlet => (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), None),
    }
}

#[inline]
fn weight_ratio(num: Option<f64>, den: Option<f64>) -> f64 {
    match (num, den) {
        (Some(a), Some(b)) => a / b,
        (Some(_), None) => 0.0,
        // the receiving parameter is always an interior (finite) value
        (None, _) => unreachable!("receiving Robin parameter cannot be Dirichlet"),
    }
}

/// Recurrence pair for a trace received on one side of subdomain `j` from its
/// neighbour. `receiving` is the parameter of the condition being fed
/// (`p_j^−` or `p_j^+`); `near` and `far` are the neighbour's parameters at
/// the interface shared with `j` and at its opposite end.
///
/// Returns `(α, β)` where α multiplies the neighbour's trace on its far side
/// and β the trace on its near side.
#[inline]
pub(crate) fn recurrence_pair(
    lambda: Complex64,
    receiving: Robin,
    near: Robin,
    far: Robin,
    width: f64,
    overlap: f64,
    k: f64,
) -> Result<(Complex64, Complex64)> {
    let (rp, rm, rw) = factors(lambda, receiving);
    let (np, nm, nw) = factors(lambda, near);
    let (fp, fm, fw) = factors(lambda, far);
    let decay = |x: f64| (-lambda * x).exp();

    let e_l = decay(width);
    let e_d = decay(overlap);
    let e_ld2 = decay(width + 2.0 * overlap);
    let e_2ld = decay(2.0 * width + overlap);
    let e_2lpd = decay(2.0 * (width + overlap));

    let denom = np * fp - nm * fm * e_2lpd;
    let magnitude = denom.norm();
    if !(magnitude > UNDERFLOW) {
        return Err(Error::DenominatorUnderflow { k, magnitude });
    }
    let alpha = (np * rp * e_l - nm * rm * e_ld2) / denom * weight_ratio(rw, fw);
    let beta = (rp * fm * e_2ld - rm * fp * e_d) / denom * weight_ratio(rw, nw);
    Ok((alpha, beta))
}

/// `(α_j^−, β_j^−)` for `2 <= j <= J` (1-based).
pub(crate) fn minus_pair(
    j: usize,
    lambda: Complex64,
    resolved: &ResolvedParams,
    cfg: &ProblemConfig,
    k: f64,
) -> Result<(Complex64, Complex64)> {
    recurrence_pair(
        lambda,
        resolved.minus(j),
        resolved.plus(j - 1),
        resolved.minus(j - 1),
        cfg.width,
        cfg.overlap,
        k,
    )
}

/// `(α_j^+, β_j^+)` for `1 <= j <= J − 1` (1-based).
pub(crate) fn plus_pair(
    j: usize,
    lambda: Complex64,
    resolved: &ResolvedParams,
    cfg: &ProblemConfig,
    k: f64,
) -> Result<(Complex64, Complex64)> {
    recurrence_pair(
        lambda,
        resolved.plus(j),
        resolved.minus(j + 1),
        resolved.plus(j + 1),
        cfg.width,
        cfg.overlap,
        k,
    )
}

/// The four coefficients `(α_j^−, β_j^−, α_j^+, β_j^+)` attached to subdomain `j`.
pub fn interface_coeffs(
    j: usize,
    k: f64,
    params: &TransmissionParams,
    cfg: &ProblemConfig,
) -> Result<InterfaceCoeffs> {
    cfg.validate()?;
    if j == 0 || j > cfg.subdomains {
        return Err(Error::IndexOutOfRange {
            index: j,
            subdomains: cfg.subdomains,
        });
    }
    let resolved = params.resolve(cfg)?;
    let lam = lambda(k, cfg);
    let minus = if j >= 2 {
        Some(minus_pair(j, lam, &resolved, cfg, k)?)
    } else {
        None
    };
    let plus = if j < cfg.subdomains {
        Some(plus_pair(j, lam, &resolved, cfg, k)?)
    } else {
        None
    };
    Ok(InterfaceCoeffs {
        alpha_minus: minus.map(|m| m.0),
        beta_minus: minus.map(|m| m.1),
        alpha_plus: plus.map(|p| p.0),
        beta_plus: plus.map(|p| p.1),
    })
}
