//! Multistart simplex search in log-parameter space, shared by the bivariate
//! and univariate fits.

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;
use crate::numerics::simplex::{simplex_minimize, SimplexConfig};

use super::fit::FitConfig;

/// Largest log-parameter accepted before the objective reports infeasible.
const MAX_LOG: f64 = 700.0;
/// Restarts from the incumbent before giving up on the stability check.
const MAX_RESTARTS: usize = 6;

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    /// Natural-scale free parameters (after the lower clamp).
    pub values: Vec<f64>,
    pub neg_log_lik: f64,
    pub converged: bool,
    pub boundary: bool,
    pub iterations: usize,
    pub evaluations: usize,
    pub failed_starts: usize,
}

pub(crate) fn to_natural(v: &[f64], clamp: f64) -> Option<Vec<f64>> {
    if v.iter().any(|x| !(*x <= MAX_LOG)) {
        return None;
    }
    Some(v.iter().map(|x| x.exp().max(clamp)).collect())
}

/// Start list: the heuristic point followed by log-uniform jitters in `[1/3, 3]`.
pub(crate) fn jittered_starts(heuristic: &[f64], config: &FitConfig) -> Vec<Vec<f64>> {
    let mut rng = RandomStream::new(config.seed, config.jitter_stream);
    let spread = 3f64.ln();
    let mut starts = vec![heuristic.iter().map(|v| v.max(config.clamp).ln()).collect::<Vec<f64>>()];
    for _ in 1..config.starts.max(1) {
        starts.push(
            heuristic
                .iter()
                .map(|v| v.max(config.clamp).ln() + rng.uniform_range(-spread, spread))
                .collect(),
        );
    }
    starts
}

/// Minimizes `neg_log_lik` (a function of natural-scale free parameters) from
/// each log-space start, then restarts from the best vertex until the value
/// stops moving.
pub(crate) fn minimize<F>(neg_log_lik: F, starts: &[Vec<f64>], config: &FitConfig) -> Result<Outcome>
where
    F: Fn(&[f64]) -> f64,
{
    let clamp = config.clamp;
    let objective = |v: &[f64]| match to_natural(v, clamp) {
        Some(p) => {
            let f = neg_log_lik(&p);
            if f.is_finite() {
                f
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    };

    let search = SimplexConfig {
        max_iter: config.max_iter,
        diam_tol: config.diam_tol * 100.0,
        val_tol: 1e-10,
        initial_step: 0.5,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    let mut evaluations = 0;
    let mut failed = 0;
    let mut last_error = String::from("objective infinite at every start");
    for start in starts {
        if !objective(start).is_finite() {
            failed += 1;
            continue;
        }
        match simplex_minimize(objective, start, &search) {
            Ok(r) => {
                iterations += r.iterations;
                evaluations += r.evaluations;
                if !r.min.is_finite() {
                    failed += 1;
                    continue;
                }
                if best.as_ref().map_or(true, |(_, f)| r.min < *f) {
                    best = Some((r.argmin, r.min));
                }
            }
            Err(e) => {
                failed += 1;
                last_error = e.to_string();
            }
        }
    }
    let (mut x, mut f) = best.ok_or_else(|| {
        Error::Fit(format!("all {} starts failed: {last_error}", starts.len()))
    })?;

    let refine = SimplexConfig {
        max_iter: config.max_iter,
        diam_tol: config.diam_tol,
        val_tol: 0.0,
        initial_step: 0.1,
    };
    let mut converged = false;
    for _ in 0..MAX_RESTARTS {
        let r = simplex_minimize(objective, &x, &refine)?;
        iterations += r.iterations;
        evaluations += r.evaluations;
        let improvement = f - r.min;
        if r.min <= f {
            x = r.argmin;
            f = r.min;
        }
        if r.converged && improvement.abs() < config.loss_tol {
            converged = true;
            break;
        }
    }

    let values = to_natural(&x, clamp).expect("incumbent is feasible");
    let boundary = values.iter().any(|v| *v <= clamp * (1.0 + 1e-9));
    Ok(Outcome {
        values,
        neg_log_lik: f,
        converged,
        boundary,
        iterations,
        evaluations,
        failed_starts: failed,
    })
}

/// Quasi-Newton refinement in log space with a backtracking line search.
///
/// `value_grad` returns the objective and its gradient with respect to the
/// natural-scale parameters. Returns the improved point when it lowers the
/// objective, otherwise the input.
pub(crate) fn polish<F>(value_grad: F, natural: &[f64], clamp: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let n = natural.len();
    let eval = |v: &[f64]| -> Option<(f64, Vec<f64>)> {
        let p = to_natural(v, clamp)?;
        let (f, g) = value_grad(&p)?;
        if !f.is_finite() || g.iter().any(|x| !x.is_finite()) {
            return None;
        }
        // Chain rule through p = exp(v).
        Some((f, g.iter().zip(&p).map(|(gi, pi)| gi * pi).collect()))
    };
    let mut x: Vec<f64> = natural.iter().map(|v| v.max(clamp).ln()).collect();
    let Some((mut f, mut g)) = eval(&x) else {
        return (natural.to_vec(), f64::INFINITY);
    };
    let start_f = f;
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..200 {
        let gnorm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gnorm < 1e-9 {
            break;
        }
        let dir: Vec<f64> = (0..n).map(|i| -(0..n).map(|j| h[i][j] * g[j]).sum::<f64>()).collect();
        let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, d)| xi + step * d).collect();
            if let Some((ft, gt)) = eval(&trial) {
                if ft <= f + 1e-4 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let done = (f - fnew).abs() < 1e-14 * f.abs().max(1.0);
        x = xn;
        f = fnew;
        g = gn;
        if done {
            break;
        }
        if sy > 1e-12 {
            let hy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| h[i][j] * y[j]).sum()).collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += ((sy + yhy) * s[i] * s[j]) / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
    }
    if f < start_f {
        (to_natural(&x, clamp).expect("accepted points are feasible"), f)
    } else {
        (natural.to_vec(), start_f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_positive_minimum() {
        let f = |p: &[f64]| (p[0] - 2.0).powi(2) + (p[1] - 0.01).powi(2) * 1e4;
        let cfg = FitConfig::default();
        let starts = jittered_starts(&[1.0, 1.0], &cfg);
        let r = minimize(f, &starts, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.values[0] - 2.0).abs() < 1e-6 && (r.values[1] - 0.01).abs() < 1e-8, "{r:?}");
        assert!(!r.boundary);
    }

    #[test]
    fn boundary_minimum_is_flagged() {
        let f = |p: &[f64]| p[0] + (p[1] - 1.0).powi(2);
        let cfg = FitConfig::default();
        let r = minimize(f, &jittered_starts(&[1.0, 3.0], &cfg), &cfg).unwrap();
        assert!(r.boundary);
        assert!(r.values[0] <= 1e-8 * (1.0 + 1e-9));
    }

    #[test]
    fn infeasible_everywhere_is_an_error() {
        let cfg = FitConfig::default();
        let r = minimize(|_| f64::INFINITY, &jittered_starts(&[1.0], &cfg), &cfg);
        assert!(matches!(r, Err(Error::Fit(_))));
    }

    #[test]
    fn polish_reaches_quadratic_minimum() {
        let vg = |p: &[f64]| Some(((p[0] - 3.0).powi(2) + (p[1] - 0.5).powi(2), vec![2.0 * (p[0] - 3.0), 2.0 * (p[1] - 0.5)]));
        let (x, f) = polish(vg, &[1.0, 1.0], 1e-8);
        assert!(f < 1e-14, "{x:?} {f}");
    }
}
