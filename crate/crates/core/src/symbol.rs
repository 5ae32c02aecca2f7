//! The Fourier symbol `λ(k) = √(k² + σ − iε)` of the strip problem.

use num_complex::Complex64;

use crate::config::ProblemConfig;

/// Square root on the branch with non-negative real part.
pub fn sqrt_positive(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    /// `λ = √(k² + σ − iε)`
    pub lambda: Complex64,
    /// `s = √(σ − iε) = λ(0)`
    pub s: Complex64,
}

/// Shift `σ − iε` of the zeroth order term.
pub fn shift(cfg: &ProblemConfig) -> Complex64 {
    Complex64::new(cfg.sigma, -cfg.epsilon)
}

pub fn symbol_of(k: f64, cfg: &ProblemConfig) -> Symbol {
    let z = shift(cfg);
    Symbol {
        lambda: lambda(k, cfg),
        s: sqrt_positive(z),
    }
}

#[inline]
pub fn lambda(k: f64, cfg: &ProblemConfig) -> Complex64 {
    sqrt_positive(Complex64::new(k * k + cfg.sigma, -cfg.epsilon))
}
