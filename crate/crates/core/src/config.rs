//! Problem data: PDE coefficients, strip geometry, outer boundary data and
//! the Robin transmission parameters exchanged at the interfaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition at the far left (`x = a_1`) and far right (`x = b_J`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OuterBc {
    Robin { p_a: f64, p_b: f64 },
    Dirichlet,
}

impl OuterBc {
    pub fn left(&self) -> Robin {
        match *self {
            OuterBc::Robin { p_a, .. } => Robin::Finite(p_a),
            OuterBc::Dirichlet => Robin::Dirichlet,
        }
    }

    pub fn right(&self) -> Robin {
        match *self {
            OuterBc::Robin { p_b, .. } => Robin::Finite(p_b),
            OuterBc::Dirichlet => Robin::Dirichlet,
        }
    }
}

/// A single Robin coefficient; `Dirichlet` is the `p -> infinity` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Robin {
    Finite(f64),
    Dirichlet,
}

impl Robin {
    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Robin::Dirichlet)
    }
}

/// Complex diffusion `Δu − (σ − iε)u = f` on `J` overlapping strips of
/// width `L + δ` and height `L̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub sigma: f64,
    pub epsilon: f64,
    /// Subdomain width `L`.
    pub width: f64,
    /// Domain height `L̂`.
    pub height: f64,
    /// Overlap `δ`.
    pub overlap: f64,
    pub subdomains: usize,
    pub outer: OuterBc,
}

impl Default for ProblemConfig {
    /// σ = ε = 1, L = L̂ = 1, δ = 1e-2, two subdomains, Robin outer data p_a = p_b = 1.
    fn default() -> Self {
        Self {
            sigma: 1.0,
            epsilon: 1.0,
            width: 1.0,
            height: 1.0,
            overlap: 1e-2,
            subdomains: 2,
            outer: OuterBc::Robin { p_a: 1.0, p_b: 1.0 },
        }
    }
}

impl ProblemConfig {
    pub fn with_subdomains(mut self, subdomains: usize) -> Self {
        self.subdomains = subdomains;
        self
    }

    pub fn with_overlap(mut self, overlap: f64) -> Self {
        self.overlap = overlap;
        self
    }

    pub fn with_outer(mut self, outer: OuterBc) -> Self {
        self.outer = outer;
        self
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.width = width;
        self
    }

    pub fn with_shift(mut self, sigma: f64, epsilon: f64) -> Self {
        self.sigma = sigma;
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad(format!("epsilon must be > 0, got {}", self.epsilon));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return bad(format!("sigma must be >= 0, got {}", self.sigma));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return bad(format!("L must be > 0, got {}", self.width));
        }
        if !(self.height > 0.0) || !self.height.is_finite() {
            return bad(format!("Lhat must be > 0, got {}", self.height));
        }
        if !(self.overlap >= 0.0) || self.overlap >= self.width {
            return bad(format!(
                "overlap must satisfy 0 <= delta < L, got delta = {}, L = {}",
                self.overlap, self.width
            ));
        }
        if self.subdomains < 2 {
            return bad(format!("need J >= 2 subdomains, got {}", self.subdomains));
        }
        if let OuterBc::Robin { p_a, p_b } = self.outer {
            if !(p_a > 0.0 && p_b > 0.0) || !p_a.is_finite() || !p_b.is_finite() {
                return bad(format!(
                    "outer Robin parameters must be finite and > 0, got p_a = {p_a}, p_b = {p_b}"
                ));
            }
        }
        Ok(())
    }

    /// Left end `a_j` of subdomain `j` (1-based).
    pub fn left_end(&self, j: usize) -> f64 {
        (j as f64 - 1.0) * self.width - 0.5 * self.overlap
    }

    /// Right end `b_j` of subdomain `j` (1-based).
    pub fn right_end(&self, j: usize) -> f64 {
        j as f64 * self.width + 0.5 * self.overlap
    }

    /// Lowest admissible Fourier frequency `π / L̂`.
    pub fn lowest_frequency(&self) -> f64 {
        std::f64::consts::PI / self.height
    }
}

/// Fourier frequency `k̃ >= 0` in the direction along the interfaces.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(k: f64) -> Result<Self> {
        if k >= 0.0 && k.is_finite() {
            Ok(Self(k))
        } else {
            Err(Error::InvalidConfig(format!("frequency must be finite and >= 0, got {k}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Discrete frequencies `k_m = mπ/L̂`, `m = 1..=modes`.
    pub fn discrete_grid(height: f64, modes: usize) -> Vec<Frequency> {
        (1..=modes)
            .map(|m| Frequency(m as f64 * std::f64::consts::PI / height))
            .collect()
    }
}

/// Which family of transmission parameters is being optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum ParamVariant {
    Uniform,
    TwoSided,
    Full,
}

impl std::str::FromStr for ParamVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "uniform" | "one" => Ok(ParamVariant::Uniform),
            "two_sided" | "twosided" | "two" => Ok(ParamVariant::TwoSided),
            "full" | "many" => Ok(ParamVariant::Full),
            other => Err(Error::InvalidParams(format!("unknown variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for ParamVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParamVariant::Uniform => "uniform",
            ParamVariant::TwoSided => "two_sided",
            ParamVariant::Full => "full",
        })
    }
}

/// Interior Robin parameters. The outer values `p_1^-` and `p_J^+` always
/// come from [`OuterBc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TransmissionParams {
    /// `p_j^- = p_j^+ = p` at every interface.
    Uniform { p: f64 },
    /// `p_j^- = p_minus`, `p_j^+ = p_plus`.
    TwoSided { p_minus: f64, p_plus: f64 },
    /// Interface values in table order `p_1^+, p_2^-, p_2^+, p_3^-, …, p_{J-1}^+, p_J^-`.
    Full { values: Vec<f64> },
}

/// Parameters resolved to per-subdomain left (`minus`) and right (`plus`)
/// coefficients for `j = 1..=J`, stored 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedParams {
    pub minus: Vec<Robin>,
    pub plus: Vec<Robin>,
}

impl ResolvedParams {
    /// `p_j^-` for 1-based `j`.
    pub fn minus(&self, j: usize) -> Robin {
        self.minus[j - 1]
    }

    /// `p_j^+` for 1-based `j`.
    pub fn plus(&self, j: usize) -> Robin {
        self.plus[j - 1]
    }
}

impl TransmissionParams {
    pub fn variant(&self) -> ParamVariant {
        match self {
            TransmissionParams::Uniform { .. } => ParamVariant::Uniform,
            TransmissionParams::TwoSided { .. } => ParamVariant::TwoSided,
            TransmissionParams::Full { .. } => ParamVariant::Full,
        }
    }

    /// Interior values as a flat slice-like vector (1, 2 or 2(J−1) entries).
    pub fn as_vec(&self) -> Vec<f64> {
        match self {
            TransmissionParams::Uniform { p } => vec![*p],
            TransmissionParams::TwoSided { p_minus, p_plus } => vec![*p_minus, *p_plus],
            TransmissionParams::Full { values } => values.clone(),
        }
    }

    pub fn from_vec(variant: ParamVariant, values: &[f64]) -> Self {
        match variant {
            ParamVariant::Uniform => TransmissionParams::Uniform { p: values[0] },
            ParamVariant::TwoSided => TransmissionParams::TwoSided {
                p_minus: values[0],
                p_plus: values[1],
            },
            ParamVariant::Full => TransmissionParams::Full {
                values: values.to_vec(),
            },
        }
    }

    /// Number of free values for a variant on `J` subdomains.
    pub fn dimension(variant: ParamVariant, subdomains: usize) -> usize {
        match variant {
            ParamVariant::Uniform => 1,
            ParamVariant::TwoSided => 2,
            ParamVariant::Full => 2 * (subdomains - 1),
        }
    }

    /// Expands to the `Full` layout for `J` subdomains.
    pub fn to_full(&self, subdomains: usize) -> TransmissionParams {
        let values = match self {
            TransmissionParams::Uniform { p } => vec![*p; 2 * (subdomains - 1)],
            TransmissionParams::TwoSided { p_minus, p_plus } => (0..subdomains - 1)
                .flat_map(|_| [*p_plus, *p_minus])
                .collect(),
            TransmissionParams::Full { values } => values.clone(),
        };
        TransmissionParams::Full { values }
    }

    pub fn validate(&self, subdomains: usize) -> Result<()> {
        if let TransmissionParams::Full { values } = self {
            if values.len() != 2 * (subdomains - 1) {
                return Err(Error::InvalidParams(format!(
                    "full parameter list for J = {subdomains} needs {} values, got {}",
                    2 * (subdomains - 1),
                    values.len()
                )));
            }
        }
        if let Some(bad) = self.as_vec().into_iter().find(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "Robin parameters must be finite and > 0, got {bad}"
            )));
        }
        Ok(())
    }

    pub fn resolve(&self, cfg: &ProblemConfig) -> Result<ResolvedParams> {
        let j_count = cfg.subdomains;
        self.validate(j_count)?;
        let mut minus = vec![Robin::Dirichlet; j_count];
        let mut plus = vec![Robin::Dirichlet; j_count];
        minus[0] = cfg.outer.left();
        plus[j_count - 1] = cfg.outer.right();
        for j in 1..j_count {
            // interface between subdomains j and j+1 (1-based)
            let (right_of_j, left_of_next) = match self {
                TransmissionParams::Uniform { p } => (*p, *p),
                TransmissionParams::TwoSided { p_minus, p_plus } => (*p_plus, *p_minus),
                TransmissionParams::Full { values } => (values[2 * (j - 1)], values[2 * (j - 1) + 1]),
            };
            plus[j - 1] = Robin::Finite(right_of_j);
            minus[j] = Robin::Finite(left_of_next);
        }
        Ok(ResolvedParams { minus, plus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configs() {
        let base = ProblemConfig::default();
        assert!(base.validate().is_ok());
        assert!(base.with_shift(1.0, 0.0).validate().is_err());
        assert!(base.with_shift(-1.0, 1.0).validate().is_err());
        assert!(base.with_overlap(1.0).validate().is_err());
        assert!(base.with_subdomains(1).validate().is_err());
        assert!(base
            .with_outer(OuterBc::Robin { p_a: 0.0, p_b: 1.0 })
            .validate()
            .is_err());
    }

    #[test]
    fn geometry_matches_strip_layout() {
        let cfg = ProblemConfig::default().with_overlap(0.1).with_subdomains(3);
        assert!((cfg.left_end(1) + 0.05).abs() < 1e-15);
        assert!((cfg.right_end(1) - 1.05).abs() < 1e-15);
        assert!((cfg.left_end(3) - 1.95).abs() < 1e-15);
        assert!((cfg.right_end(1) - cfg.left_end(2) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn full_params_resolve_in_table_order() {
        let cfg = ProblemConfig::default().with_subdomains(3);
        let params = TransmissionParams::Full {
            values: vec![1.0, 2.0, 3.0, 4.0],
        };
        let r = params.resolve(&cfg).unwrap();
        assert_eq!(r.minus(1), Robin::Finite(1.0)); // p_a
        assert_eq!(r.plus(1), Robin::Finite(1.0));
        assert_eq!(r.minus(2), Robin::Finite(2.0));
        assert_eq!(r.plus(2), Robin::Finite(3.0));
        assert_eq!(r.minus(3), Robin::Finite(4.0));
        assert_eq!(r.plus(3), Robin::Finite(1.0)); // p_b
    }

    #[test]
    fn wrong_full_length_is_rejected() {
        let cfg = ProblemConfig::default().with_subdomains(4);
        let params = TransmissionParams::Full { values: vec![1.0; 4] };
        assert!(matches!(params.resolve(&cfg), Err(Error::InvalidParams(_))));
        let negative = TransmissionParams::Uniform { p: -1.0 };
        assert!(negative.resolve(&cfg).is_err());
    }

    #[test]
    fn two_sided_expands_to_alternating_full() {
        let p = TransmissionParams::TwoSided {
            p_minus: 2.0,
            p_plus: 9.0,
        };
        assert_eq!(
            p.to_full(3).as_vec(),
            vec![9.0, 2.0, 9.0, 2.0],
        );
        let cfg = ProblemConfig::default().with_subdomains(3);
        assert_eq!(p.resolve(&cfg).unwrap(), p.to_full(3).resolve(&cfg).unwrap());
    }
}
