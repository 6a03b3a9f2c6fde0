//! Nelder–Mead simplex minimizer.
//!
//! Objective values of `+inf` (or NaN, which is treated the same way) mark
//! infeasible points; the simplex simply retreats from them.

use crate::error::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexConfig {
    pub max_iter: usize,
    /// Stop once every vertex is within this sup-norm distance of the best.
    pub diam_tol: f64,
    /// Stop once the spread of vertex values falls below this.
    pub val_tol: f64,
    /// Edge length of the initial simplex along each coordinate axis.
    pub initial_step: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        SimplexConfig {
            max_iter: 5000,
            diam_tol: 1e-8,
            val_tol: 1e-12,
            initial_step: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub argmin: Vec<f64>,
    pub min: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// `false` when the iteration budget ran out first.
    pub converged: bool,
    pub diameter: f64,
    pub spread: f64,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .flat_map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Minimizes `f` from `x0`.
pub fn simplex_minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], config: &SimplexConfig) -> Result<SimplexResult> {
    let n = x0.len();
    if n == 0 {
        return Err(Error::Argument("simplex_minimize: empty starting point".into()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument(format!("simplex_minimize: non-finite start {x0:?}")));
    }
    let mut obj = Counted { f, evaluations: 0 };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += config.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| obj.call(v)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        for (k, o) in order.iter_mut().enumerate() {
            *o = k;
        }

        let diam = diameter(&simplex);
        let spread = values[n] - values[0];
        if diam < config.diam_tol || spread < config.val_tol {
            converged = true;
            break;
        }
        if iterations >= config.max_iter {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let point = |coef: f64, out: &mut Vec<f64>| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&worst) {
                *o = c + coef * (c - w);
            }
        };

        point(REFLECT, &mut trial);
        let f_r = obj.call(&trial);

        if f_r < values[0] {
            point(EXPAND, &mut trial2);
            let f_e = obj.call(&trial2);
            if f_e < f_r {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_e;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = f_r;
            continue;
        }

        let accepted = if f_r < values[n] {
            // Outside contraction towards the reflected point.
            point(REFLECT * CONTRACT, &mut trial2);
            let f_c = obj.call(&trial2);
            if f_c <= f_r {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_c;
                true
            } else {
                false
            }
        } else {
            point(-CONTRACT, &mut trial2);
            let f_c = obj.call(&trial2);
            if f_c < values[n] {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_c;
                true
            } else {
                false
            }
        };

        if !accepted {
            let best = simplex[0].clone();
            for k in 1..=n {
                for (x, b) in simplex[k].iter_mut().zip(&best) {
                    *x = b + SHRINK * (*x - b);
                }
                values[k] = obj.call(&simplex[k]);
            }
        }
    }

    Ok(SimplexResult {
        argmin: simplex[0].clone(),
        min: values[0],
        iterations,
        evaluations: obj.evaluations,
        converged,
        diameter: diameter(&simplex),
        spread: values[n] - values[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_quadratic() {
        let c = [1.5, -2.0, 0.25];
        let f = |x: &[f64]| x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        for start in [[0.0, 0.0, 0.0], [10.0, 10.0, -10.0], [-3.0, 7.0, 1.0]] {
            let cfg = SimplexConfig {
                val_tol: 0.0,
                diam_tol: 1e-9,
                ..SimplexConfig::default()
            };
            let r = simplex_minimize(f, &start, &cfg).unwrap();
            assert!(r.converged);
            for (a, b) in r.argmin.iter().zip(&c) {
                assert!((a - b).abs() < 1e-6, "{:?}", r.argmin);
            }
        }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let cfg = SimplexConfig {
            val_tol: 0.0,
            diam_tol: 1e-10,
            max_iter: 20_000,
            initial_step: 0.5,
        };
        let r = simplex_minimize(f, &[-1.2, 1.0], &cfg).unwrap();
        assert!((r.argmin[0] - 1.0).abs() < 1e-4 && (r.argmin[1] - 1.0).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn infinite_sentinel_half_space() {
        // Minimum of the quadratic lies at x0 = -1, outside the feasible half x0 > 0.5.
        let f = |x: &[f64]| {
            if x[0] <= 0.5 {
                f64::INFINITY
            } else {
                (x[0] + 1.0).powi(2) + (x[1] - 2.0).powi(2)
            }
        };
        let cfg = SimplexConfig {
            val_tol: 0.0,
            ..SimplexConfig::default()
        };
        let r = simplex_minimize(f, &[3.0, 0.0], &cfg).unwrap();
        assert!(r.min.is_finite());
        assert!(r.argmin[0] > 0.5);
        assert!((r.argmin[0] - 0.5).abs() < 1e-6 && (r.argmin[1] - 2.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn iteration_budget_flags_non_convergence() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let cfg = SimplexConfig {
            max_iter: 5,
            ..SimplexConfig::default()
        };
        let r = simplex_minimize(f, &[-1.2, 1.0], &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 5);
        assert!(r.min <= f(&[-1.2, 1.0]));
    }

    #[test]
    fn bad_starts_rejected() {
        assert!(simplex_minimize(|_| 0.0, &[], &SimplexConfig::default()).is_err());
        assert!(simplex_minimize(|_| 0.0, &[f64::NAN], &SimplexConfig::default()).is_err());
    }
}
