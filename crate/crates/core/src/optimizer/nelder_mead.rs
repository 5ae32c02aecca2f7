//! Bounded Nelder–Mead simplex search with dimension-adaptive coefficients.

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexSettings {
    /// Initial step along each coordinate.
    pub step: f64,
    /// Stop once the spread of objective values falls below this.
    pub f_tolerance: f64,
    /// ... and the simplex diameter (max-norm) falls below this.
    pub x_tolerance: f64,
    pub max_evaluations: usize,
}

fn clamp(x: &mut [f64], bounds: (f64, f64)) {
    for v in x.iter_mut() {
        *v = v.clamp(bounds.0, bounds.1);
    }
}

/// Minimises `f` starting from `x0`, keeping every vertex inside `bounds`.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    bounds: (f64, f64),
    settings: SimplexSettings,
) -> SimplexOutcome {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, shrink) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut start = x0.to_vec();
    clamp(&mut start, bounds);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(&start, &mut evaluations);
    simplex.push((start.clone(), f0));
    for i in 0..n {
        let mut x = start.clone();
        // step inward when the start sits on the upper bound
        x[i] = if x[i] + settings.step <= bounds.1 {
            x[i] + settings.step
        } else {
            x[i] - settings.step
        };
        let fx = eval(&x, &mut evaluations);
        simplex.push((x, fx));
    }

    let mut converged = false;
    while evaluations < settings.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= settings.f_tolerance && diameter <= settings.x_tolerance {
            converged = true;
            break;
        }
        if diameter <= 1e-3 * settings.x_tolerance {
            // collapsed simplex: flat direction, nothing more to gain here
            converged = (worst - best).abs() <= settings.f_tolerance;
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp(&mut p, bounds);
            p
        };

        let xr = along(alpha);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = along(alpha * gamma);
            let fe = eval(&xe, &mut evaluations);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = along(alpha * rho);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        };
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = anchor
                .iter()
                .zip(&vertex.0)
                .map(|(a, v)| a + shrink * (v - a))
                .collect();
            let fx = eval(&x, &mut evaluations);
            *vertex = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    SimplexOutcome {
        x,
        f,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> SimplexSettings {
        SimplexSettings {
            step: 0.5,
            f_tolerance: 1e-12,
            x_tolerance: 1e-8,
            max_evaluations: 20_000,
        }
    }

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(&mut f, &[-1.2, 1.0], (-5.0, 5.0), settings());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn one_dimensional_kink() {
        // max of two lines: minimum where they cross, at x = 0.3
        let mut f = |x: &[f64]| (2.0 * (x[0] - 0.3)).max(-(x[0] - 0.3));
        let out = minimize(&mut f, &[2.0], (-10.0, 10.0), settings());
        assert!((out.x[0] - 0.3).abs() < 1e-8);
    }

    #[test]
    fn respects_bounds() {
        let mut f = |x: &[f64]| x.iter().map(|v| (v + 3.0).powi(2)).sum();
        let out = minimize(&mut f, &[0.5, 0.5, 0.5], (-1.0, 1.0), settings());
        assert!(out.x.iter().all(|v| (*v + 1.0).abs() < 1e-6));
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(
            &mut f,
            &[-1.2, 1.0],
            (-5.0, 5.0),
            SimplexSettings {
                max_evaluations: 10,
                ..settings()
            },
        );
        assert!(!out.converged);
        assert!(out.evaluations >= 10);
    }
}
