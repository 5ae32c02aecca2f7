//! Finite-difference realisation of the parallel Schwarz iteration in two
//! dimensions, used to measure error contraction directly.
//!
//! Each subdomain `[a_j, b_j] × (0, L̂)` carries a uniform grid of spacing
//! `h`. Unknowns are the nodes `x_i = a_j + i h`, `i = 0..=(L+δ)/h`, at the
//! interior heights `y_r = r h`, `r = 1..L̂/h−1`; the top and bottom rows are
//! homogeneous Dirichlet. Robin rows use a centred ghost-point closure, so
//! the scheme is second order up to the interfaces, and each Robin trace is
//! read from the neighbour with the same centred difference.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::Col;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed::ConvergenceFactor;
use crate::config::{ProblemConfig, ResolvedParams, Robin, TransmissionParams};
use crate::error::{Error, Result};
use crate::symbol::shift;

/// Iterations used by [`run_osm`] callers that have no preference.
pub const DEFAULT_ITERATIONS: usize = 40;

const MESH_TOLERANCE: f64 = 1e-9;

/// Relative amplitude below which a single-mode run is dominated by roundoff.
const ROUNDOFF_FLOOR: f64 = 1e-12;

fn steps(quantity: &'static str, value: f64, h: f64, min: usize) -> Result<usize> {
    let ratio = value / h;
    let n = ratio.round();
    if !(ratio.is_finite() && (ratio - n).abs() <= MESH_TOLERANCE * ratio.max(1.0) && n >= min as f64) {
        return Err(Error::MeshMismatch { quantity, value, h });
    }
    Ok(n as usize)
}

/// Uniform grid shared by all subdomains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub h: f64,
    /// `δ / h`.
    pub overlap_steps: usize,
    /// `L / h`.
    pub width_steps: usize,
    /// `L̂ / h`.
    pub height_steps: usize,
}

impl Mesh {
    pub fn new(cfg: &ProblemConfig, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidConfig(format!("mesh size must be positive, got {h}")));
        }
        Ok(Self {
            h,
            overlap_steps: steps("overlap", cfg.overlap, h, 1)?,
            width_steps: steps("width", cfg.width, h, 1)?,
            height_steps: steps("height", cfg.height, h, 2)?,
        })
    }

    /// Grid columns per subdomain, `(L+δ)/h + 1`.
    pub fn columns(&self) -> usize {
        self.width_steps + self.overlap_steps + 1
    }

    /// Unknown rows per column, `L̂/h − 1`.
    pub fn rows(&self) -> usize {
        self.height_steps - 1
    }

    pub fn unknowns(&self) -> usize {
        self.columns() * self.rows()
    }

    pub fn index(&self, column: usize, row: usize) -> usize {
        column * self.rows() + row
    }

    /// Frequency `mπ/L̂` of the discrete sine mode `m`.
    pub fn mode_frequency(&self, m: usize) -> f64 {
        m as f64 * std::f64::consts::PI / (self.height_steps as f64 * self.h)
    }

    /// `sin(mπ y_r / L̂)` at the unknown rows.
    pub fn sine_mode(&self, m: usize) -> Vec<f64> {
        let n = self.height_steps as f64;
        (1..self.height_steps)
            .map(|r| (m as f64 * std::f64::consts::PI * r as f64 / n).sin())
            .collect()
    }
}

/// One subdomain system with its factorization.
pub struct SubdomainProblem {
    pub index: usize,
    pub mesh: Mesh,
    pub left: Robin,
    pub right: Robin,
    matrix: SparseColMat<usize, Complex64>,
    lu: Lu<usize, Complex64>,
}

impl std::fmt::Debug for SubdomainProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubdomainProblem")
            .field("index", &self.index)
            .field("mesh", &self.mesh)
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

impl SubdomainProblem {
    pub fn matrix(&self) -> &SparseColMat<usize, Complex64> {
        &self.matrix
    }

    /// Applies the assembled operator to a grid function.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let n = self.mesh.unknowns();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            let col = self.matrix.col_range(c);
            let rows = &self.matrix.symbolic().row_idx()[col.clone()];
            let vals = &self.matrix.val()[col];
            for (r, v) in rows.iter().zip(vals) {
                out[*r] += v * u[c];
            }
        }
        out
    }

    /// Solves with Robin data `left`, `right` (one value per unknown row).
    pub fn solve(&self, left: &[Complex64], right: &[Complex64]) -> Vec<Complex64> {
        let m = self.mesh;
        let (rows, last) = (m.rows(), m.columns() - 1);
        let scale = -2.0 / m.h;
        let mut rhs = Col::<Complex64>::zeros(m.unknowns());
        for r in 0..rows {
            if !self.left.is_dirichlet() {
                rhs[m.index(0, r)] = left[r] * scale;
            }
            if !self.right.is_dirichlet() {
                rhs[m.index(last, r)] = right[r] * scale;
            }
        }
        self.lu.solve_in_place(&mut rhs);
        (0..m.unknowns()).map(|i| rhs[i]).collect()
    }
}

fn assemble(mesh: Mesh, shift: Complex64, left: Robin, right: Robin) -> Result<SparseColMat<usize, Complex64>> {
    let h2 = mesh.h * mesh.h;
    let (rows, columns) = (mesh.rows(), mesh.columns());
    let last = columns - 1;
    let mut triplets = Vec::with_capacity(5 * mesh.unknowns());
    let mut push = |r: usize, c: usize, v: Complex64| triplets.push(Triplet::new(r, c, v));
    for i in 0..columns {
        let boundary = match i {
            0 => Some((left, 1)),
            _ if i == last => Some((right, last - 1)),
            _ => None,
        };
        for r in 0..rows {
            let me = mesh.index(i, r);
            if let Some((Robin::Dirichlet, _)) = boundary {
                push(me, me, Complex64::new(1.0, 0.0));
                continue;
            }
            let mut diag = Complex64::new(-4.0 / h2, 0.0) - shift;
            if r > 0 {
                push(me, mesh.index(i, r - 1), (1.0 / h2).into());
            }
            if r + 1 < rows {
                push(me, mesh.index(i, r + 1), (1.0 / h2).into());
            }
            match boundary {
                Some((Robin::Finite(p), inner)) => {
                    // ghost value eliminated through the centred Robin condition
                    diag -= 2.0 * p / mesh.h;
                    push(me, mesh.index(inner, r), (2.0 / h2).into());
                }
                _ => {
                    // Dirichlet neighbours are known zeros
                    if !(i == 1 && left.is_dirichlet()) {
                        push(me, mesh.index(i - 1, r), (1.0 / h2).into());
                    }
                    if !(i + 1 == last && right.is_dirichlet()) {
                        push(me, mesh.index(i + 1, r), (1.0 / h2).into());
                    }
                }
            }
            push(me, me, diag);
        }
    }
    let n = mesh.unknowns();
    SparseColMat::try_new_from_triplets(n, n, &triplets).map_err(|e| Error::Solver(format!("{e:?}")))
}

/// The discretised decomposition: one factorized system per subdomain.
#[derive(Debug)]
pub struct Discretization {
    pub cfg: ProblemConfig,
    pub mesh: Mesh,
    pub params: TransmissionParams,
    resolved: ResolvedParams,
    pub problems: Vec<SubdomainProblem>,
}

/// Builds and factorizes every subdomain system for the given parameters.
pub fn discretize(cfg: &ProblemConfig, h: f64, params: &TransmissionParams) -> Result<Discretization> {
    cfg.validate()?;
    let resolved = params.resolve(cfg)?;
    discretize_resolved(cfg, h, params, resolved)
}

fn discretize_resolved(
    cfg: &ProblemConfig,
    h: f64,
    params: &TransmissionParams,
    resolved: ResolvedParams,
) -> Result<Discretization> {
    let mesh = Mesh::new(cfg, h)?;
    let s = shift(cfg);
    let problems = (1..=cfg.subdomains)
        .map(|j| {
            let (left, right) = (resolved.minus(j), resolved.plus(j));
            let matrix = assemble(mesh, s, left, right)?;
            let lu = matrix.sp_lu().map_err(|e| Error::Solver(format!("{e:?}")))?;
            Ok(SubdomainProblem {
                index: j,
                mesh,
                left,
                right,
                matrix,
                lu,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Discretization {
        cfg: cfg.clone(),
        mesh,
        params: params.clone(),
        resolved,
        problems,
    })
}

/// Robin data entering every subdomain; the outer entries stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceData {
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl InterfaceData {
    pub fn zeros(disc: &Discretization) -> Self {
        let blank = vec![vec![Complex64::new(0.0, 0.0); disc.mesh.rows()]; disc.cfg.subdomains];
        Self {
            left: blank.clone(),
            right: blank,
        }
    }

    /// Independent uniform samples in `[-1, 1] + i[-1, 1]` on every interface.
    pub fn random(disc: &Discretization, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Self::zeros(disc);
        let j_count = disc.cfg.subdomains;
        for j in 0..j_count {
            for r in 0..disc.mesh.rows() {
                if j > 0 {
                    data.left[j][r] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
                if j + 1 < j_count {
                    data.right[j][r] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
        }
        data
    }

    /// The sum of the sine modes `ms` on every interface.
    pub fn modes(disc: &Discretization, ms: &[usize]) -> Self {
        let mut data = Self::zeros(disc);
        let j_count = disc.cfg.subdomains;
        for &m in ms {
            let shape = disc.mesh.sine_mode(m);
            for j in 0..j_count {
                for (r, v) in shape.iter().enumerate() {
                    if j > 0 {
                        data.left[j][r] += v;
                    }
                    if j + 1 < j_count {
                        data.right[j][r] += v;
                    }
                }
            }
        }
        data
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &Vec<Vec<Complex64>>| v.iter().map(|c| c.iter().map(|z| z * factor).collect()).collect();
        Self {
            left: s(&self.left),
            right: s(&self.right),
        }
    }
}

/// Outcome of one simulated iteration run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatorReport {
    pub h: f64,
    pub iterations: usize,
    /// Max-norm of the iterate after each iteration (the exact solution is 0).
    pub errors: Vec<f64>,
    /// Geometric mean of successive error ratios over the last half.
    pub contraction: f64,
    /// `max_m ρ(k_m)` over the resolved modes `m = 1..L̂/h−1`.
    pub prediction: f64,
    /// `|contraction − prediction| / prediction`.
    pub relative_gap: f64,
    /// Whether the errors are nonincreasing over the last half.
    pub monotone_tail: bool,
}

/// Per-mode contraction measured from a single sine mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRate {
    pub mode: usize,
    pub k: f64,
    pub measured: f64,
    pub predicted: f64,
}

fn max_norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Geometric mean of `e_{n+1}/e_n` over the last half of `errors`.
pub fn contraction_estimate(errors: &[f64]) -> f64 {
    let n = errors.len();
    if n < 2 {
        return 0.0;
    }
    let start = (n - 1) / 2;
    let (first, last) = (errors[start], errors[n - 1]);
    if first == 0.0 {
        return 0.0;
    }
    (last / first).powf(1.0 / (n - 1 - start) as f64)
}

fn traces_from(disc: &Discretization, iterates: &[Vec<Complex64>], data: &mut InterfaceData) {
    let mesh = disc.mesh;
    let j_count = disc.cfg.subdomains;
    let inv = 1.0 / (2.0 * mesh.h);
    for j in 0..j_count {
        // left data of j + 1 at a_{j+1}, which is column L/h of subdomain j
        if j + 1 < j_count {
            let p = match disc.resolved.minus(j + 2) {
                Robin::Finite(p) => p,
                Robin::Dirichlet => unreachable!("interfaces carry finite parameters"),
            };
            let i = mesh.width_steps;
            for r in 0..mesh.rows() {
                let u = &iterates[j];
                let dx = (u[mesh.index(i + 1, r)] - u[mesh.index(i - 1, r)]) * inv;
                data.left[j + 1][r] = -dx + u[mesh.index(i, r)] * p;
            }
        }
        // right data of j − 1 at b_{j−1}, which is column δ/h of subdomain j
        if j > 0 {
            let p = match disc.resolved.plus(j) {
                Robin::Finite(p) => p,
                Robin::Dirichlet => unreachable!("interfaces carry finite parameters"),
            };
            let i = mesh.overlap_steps;
            for r in 0..mesh.rows() {
                let u = &iterates[j];
                let dx = (u[mesh.index(i + 1, r)] - u[mesh.index(i - 1, r)]) * inv;
                data.right[j - 1][r] = dx + u[mesh.index(i, r)] * p;
            }
        }
    }
}

/// Runs `iterations` parallel Schwarz steps from `initial`, returning the
/// per-iteration errors and the final iterates.
pub fn iterate(
    disc: &Discretization,
    initial: &InterfaceData,
    iterations: usize,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    iterate_measured(disc, initial, iterations, &|u: &[Complex64]| max_norm(u))
}

/// As [`iterate`], with the per-subdomain size of an iterate given by `measure`.
fn iterate_measured(
    disc: &Discretization,
    initial: &InterfaceData,
    iterations: usize,
    measure: &(dyn Fn(&[Complex64]) -> f64 + Sync),
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let mut data = initial.clone();
    let mut errors = Vec::with_capacity(iterations);
    let mut iterates = Vec::new();
    for n in 0..iterations {
        iterates = disc
            .problems
            .par_iter()
            .enumerate()
            .map(|(j, prob)| prob.solve(&data.left[j], &data.right[j]))
            .collect();
        let e = iterates.iter().map(|u| measure(u)).fold(0.0, f64::max);
        if !e.is_finite() || (n >= 5 && e > 10.0 * errors[n - 5]) {
            return Err(Error::DivergenceDetected {
                iteration: n + 1,
                error: e,
            });
        }
        errors.push(e);
        traces_from(disc, &iterates, &mut data);
    }
    Ok((errors, iterates))
}

/// `max_m ρ(k_m)` over the modes resolved by the mesh.
pub fn predicted_contraction(disc: &Discretization) -> Result<f64> {
    let evaluator = ConvergenceFactor::new(&disc.params, &disc.cfg)?;
    (1..disc.mesh.height_steps)
        .map(|m| evaluator.rho(disc.mesh.mode_frequency(m)))
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}

/// Measured contraction from `initial` compared with the Fourier prediction.
pub fn run_from(disc: &Discretization, initial: &InterfaceData, iterations: usize) -> Result<SimulatorReport> {
    if iterations < 4 {
        return Err(Error::InvalidConfig(format!("need at least 4 iterations, got {iterations}")));
    }
    let (errors, _) = iterate(disc, initial, iterations)?;
    let contraction = contraction_estimate(&errors);
    let prediction = predicted_contraction(disc)?;
    let start = (iterations - 1) / 2;
    let monotone_tail = errors[start..].windows(2).all(|w| w[1] <= w[0]);
    Ok(SimulatorReport {
        h: disc.mesh.h,
        iterations,
        contraction,
        prediction,
        relative_gap: (contraction - prediction).abs() / prediction,
        monotone_tail,
        errors,
    })
}

/// Measured contraction from random interface data drawn with `seed`.
pub fn run_osm(disc: &Discretization, iterations: usize, seed: u64) -> Result<SimulatorReport> {
    run_from(disc, &InterfaceData::random(disc, seed), iterations)
}

/// One single-mode run per entry of `modes`.
pub fn modewise_rates(disc: &Discretization, modes: &[usize], iterations: usize) -> Result<Vec<ModeRate>> {
    let evaluator = ConvergenceFactor::new(&disc.params, &disc.cfg)?;
    modes
        .iter()
        .map(|&m| {
            if m == 0 || m >= disc.mesh.height_steps {
                return Err(Error::InvalidConfig(format!(
                    "mode {m} outside 1..={}",
                    disc.mesh.height_steps - 1
                )));
            }
            // track the active sine coefficient so that roundoff in slower
            // modes cannot take over once mode m has decayed
            let mesh = disc.mesh;
            let shape = mesh.sine_mode(m);
            let amplitude = |u: &[Complex64]| {
                (0..mesh.columns())
                    .map(|i| {
                        shape
                            .iter()
                            .enumerate()
                            .map(|(r, s)| u[mesh.index(i, r)] * s)
                            .sum::<Complex64>()
                            .norm()
                    })
                    .fold(0.0, f64::max)
            };
            if iterations < 4 {
                return Err(Error::InvalidConfig(format!("need at least 4 iterations, got {iterations}")));
            }
            let (mut amplitudes, _) =
                iterate_measured(disc, &InterfaceData::modes(disc, &[m]), iterations, &amplitude)?;
            // rapidly damped modes reach roundoff long before the last iteration
            let floor = ROUNDOFF_FLOOR * amplitudes[0];
            let usable = amplitudes.iter().position(|a| *a < floor).unwrap_or(amplitudes.len());
            amplitudes.truncate(usable.max(2));
            let k = mesh.mode_frequency(m);
            Ok(ModeRate {
                mode: m,
                k,
                measured: contraction_estimate(&amplitudes),
                predicted: evaluator.rho(k)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OuterBc;

    fn cfg(overlap: f64) -> ProblemConfig {
        ProblemConfig::default().with_overlap(overlap)
    }

    #[test]
    fn counts_unknowns() {
        let mesh = Mesh::new(&cfg(0.1), 0.05).unwrap();
        assert_eq!((mesh.columns(), mesh.rows()), (23, 19));
        let disc = discretize(&cfg(0.1), 0.05, &TransmissionParams::Uniform { p: 2.0 }).unwrap();
        assert_eq!(disc.problems.len(), 2);
        assert!(disc.problems.iter().all(|p| p.matrix().nrows() == 23 * 19));
    }

    #[test]
    fn mesh_mismatch_names_quantity() {
        let e = Mesh::new(&cfg(0.03), 0.02).unwrap_err();
        assert!(matches!(e, Error::MeshMismatch { quantity: "overlap", .. }));
        let e = Mesh::new(&cfg(0.04).with_width(1.005), 0.01).unwrap_err();
        assert!(matches!(e, Error::MeshMismatch { quantity: "width", .. }));
    }

    #[test]
    fn symmetric_systems_are_mirror_images() {
        let disc = discretize(&cfg(0.1), 0.05, &TransmissionParams::Uniform { p: 2.0 }).unwrap();
        let mesh = disc.mesh;
        let a = disc.problems[0].matrix().to_dense();
        let b = disc.problems[1].matrix().to_dense();
        let last = mesh.columns() - 1;
        let mirror = |k: usize| {
            let (i, r) = (k / mesh.rows(), k % mesh.rows());
            mesh.index(last - i, r)
        };
        for r in 0..mesh.unknowns() {
            for c in 0..mesh.unknowns() {
                assert_eq!(a[(r, c)], b[(mirror(r), mirror(c))]);
            }
        }
    }

    #[test]
    fn interior_truncation_is_second_order() {
        // continuous mode sin(k y) e^{-λ x}: residual of interior rows is O(h²)
        let base = cfg(0.1);
        let residual = |h: f64| {
            let disc = discretize(&base, h, &TransmissionParams::Uniform { p: 2.0 }).unwrap();
            let mesh = disc.mesh;
            let k = mesh.mode_frequency(2);
            let lam = crate::symbol::lambda(k, &base);
            let u: Vec<Complex64> = (0..mesh.unknowns())
                .map(|idx| {
                    let (i, r) = (idx / mesh.rows(), idx % mesh.rows());
                    let (x, y) = (i as f64 * h, (r + 1) as f64 * h);
                    (-lam * x).exp() * (k * y).sin()
                })
                .collect();
            let au = disc.problems[0].apply(&u);
            let mut worst: f64 = 0.0;
            for i in 1..mesh.columns() - 1 {
                for r in 0..mesh.rows() {
                    worst = worst.max(au[mesh.index(i, r)].norm());
                }
            }
            worst
        };
        let (coarse, fine) = (residual(0.02), residual(0.01));
        let order = (coarse / fine).log2();
        assert!((order - 2.0).abs() < 0.1, "observed order {order}");
    }

    #[test]
    fn zero_data_stays_zero() {
        let disc = discretize(&cfg(0.04), 0.02, &TransmissionParams::Uniform { p: 3.0 }).unwrap();
        let (errors, iterates) = iterate(&disc, &InterfaceData::zeros(&disc), 6).unwrap();
        assert!(errors.iter().all(|e| *e == 0.0));
        assert!(iterates.iter().flatten().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn doubling_data_doubles_errors() {
        let disc = discretize(&cfg(0.04), 0.02, &TransmissionParams::Uniform { p: 3.0 }).unwrap();
        let data = InterfaceData::random(&disc, 7);
        let (a, _) = iterate(&disc, &data, 8).unwrap();
        let (b, _) = iterate(&disc, &data.scaled(2.0), 8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(2.0 * x, *y);
        }
    }

    #[test]
    fn single_mode_stays_single() {
        let disc = discretize(&cfg(0.04), 0.02, &TransmissionParams::Uniform { p: 3.0 }).unwrap();
        let mesh = disc.mesh;
        let (_, iterates) = iterate(&disc, &InterfaceData::modes(&disc, &[3]), 10).unwrap();
        let u = &iterates[0];
        let column = mesh.width_steps / 2;
        let coefficient = |m: usize| -> f64 {
            mesh.sine_mode(m)
                .iter()
                .enumerate()
                .map(|(r, s)| u[mesh.index(column, r)] * s)
                .sum::<Complex64>()
                .norm()
        };
        let active = coefficient(3);
        for m in (1..mesh.height_steps).filter(|m| *m != 3) {
            assert!(coefficient(m) < 1e-10 * active, "mode {m}");
        }
    }

    #[test]
    fn divergence_is_reported() {
        // negative interface parameters bypass validation only here
        let c = cfg(0.04);
        let p = Robin::Finite(-30.0);
        let resolved = ResolvedParams {
            minus: vec![Robin::Finite(1.0), p],
            plus: vec![p, Robin::Finite(1.0)],
        };
        let disc = discretize_resolved(&c, 0.02, &TransmissionParams::Uniform { p: 30.0 }, resolved).unwrap();
        let e = iterate(&disc, &InterfaceData::random(&disc, 1), 40);
        assert!(matches!(e, Err(Error::DivergenceDetected { .. })), "{e:?}");
    }

    #[test]
    fn dirichlet_outer_rows_are_identity() {
        let c = cfg(0.04).with_outer(OuterBc::Dirichlet);
        let disc = discretize(&c, 0.02, &TransmissionParams::Uniform { p: 3.0 }).unwrap();
        let u = disc.problems[0].solve(
            &vec![Complex64::new(5.0, 0.0); disc.mesh.rows()],
            &vec![Complex64::new(1.0, 0.0); disc.mesh.rows()],
        );
        assert!((0..disc.mesh.rows()).all(|r| u[disc.mesh.index(0, r)].norm() == 0.0));
    }

    #[test]
    fn contraction_of_geometric_sequence() {
        let e: Vec<f64> = (0..10).map(|n| 0.5f64.powi(n)).collect();
        assert!((contraction_estimate(&e) - 0.5).abs() < 1e-14);
        assert_eq!(contraction_estimate(&[0.0, 0.0, 0.0]), 0.0);
    }
}
