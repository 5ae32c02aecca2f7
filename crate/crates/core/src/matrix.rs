//! Substructured iteration matrix on the interface Robin traces.
//!
//! Unknown ordering is `(R_+(b_1), R_−(a_2), R_+(b_2), …, R_+(b_{J−1}), R_−(a_J))`;
//! the traces `R_−(a_1)` and `R_+(b_J)` vanish identically and are dropped,
//! leaving a matrix of dimension `2(J − 1)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coeffs::{minus_pair, plus_pair};
use crate::config::{Frequency, ProblemConfig, ResolvedParams, TransmissionParams};
use crate::error::{Error, Result};
use crate::symbol::lambda;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationMatrix {
    pub k: Frequency,
    pub entries: DMatrix<Complex64>,
}

/// Position of `R_+(b_j)` in the trace vector, `1 <= j <= J − 1`.
#[inline]
pub fn plus_index(j: usize) -> usize {
    2 * (j - 1)
}

/// Position of `R_−(a_j)` in the trace vector, `2 <= j <= J`.
#[inline]
pub fn minus_index(j: usize) -> usize {
    2 * j - 3
}

impl IterationMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.entries)
    }
}

pub(crate) fn assemble_resolved(
    k: f64,
    resolved: &ResolvedParams,
    cfg: &ProblemConfig,
) -> Result<DMatrix<Complex64>> {
    let j_count = cfg.subdomains;
    let n = 2 * (j_count - 1);
    let lam = lambda(k, cfg);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for j in 2..=j_count {
        let (alpha, beta) = minus_pair(j, lam, resolved, cfg, k)?;
        let row = minus_index(j);
        if j > 2 {
            m[(row, minus_index(j - 1))] = alpha;
        }
        m[(row, plus_index(j - 1))] = beta;
    }
    for j in 1..j_count {
        let (alpha, beta) = plus_pair(j, lam, resolved, cfg, k)?;
        let row = plus_index(j);
        if j + 1 < j_count {
            m[(row, plus_index(j + 1))] = alpha;
        }
        m[(row, minus_index(j + 1))] = beta;
    }
    Ok(m)
}

pub fn assemble_t(k: f64, params: &TransmissionParams, cfg: &ProblemConfig) -> Result<IterationMatrix> {
    cfg.validate()?;
    let resolved = params.resolve(cfg)?;
    Ok(IterationMatrix {
        k: Frequency::new(k)?,
        entries: assemble_resolved(k, &resolved, cfg)?,
    })
}

/// Largest eigenvalue modulus of a dense complex matrix.
pub fn spectral_radius(m: &DMatrix<Complex64>) -> Result<f64> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Solver(format!("matrix is {}x{}, not square", n, m.ncols())));
    }
    if n == 0 {
        return Ok(0.0);
    }
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let dense = faer::Mat::<Complex64>::from_fn(n, n, |r, c| m[(r, c)]);
    let eig = dense
        .eigenvalues()
        .map_err(|_| Error::NonConvergence { dim: n })?;
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho.is_finite() {
        Ok(rho)
    } else {
        Err(Error::NonConvergence { dim: n })
    }
}
