use crate::begled::{pow_ln, BegledParams, BivariatePoint, Region};
use crate::egled::{ln_one_minus_exp_neg, Baseline, EgledParams};
use crate::error::{Error, Result};

use super::sample::PartitionedSample;

/// Log-likelihood of the bivariate model over a partitioned sample.
///
/// Returns `-inf` rather than an error when a term underflows or is undefined,
/// so optimizers can treat the point as infeasible.
pub fn log_likelihood(p: &BegledParams, s: &PartitionedSample) -> f64 {
    let base = p.baseline();
    let (t1, t2, t3) = (p.theta1(), p.theta2(), p.theta3());
    let pairs = s.pairs();
    let mut total = 0.0;

    let c_below = (t2 * (t1 + t3)).ln();
    for &i in s.below() {
        let q = pairs[i];
        total += c_below
            + base.ln_dpsi(q.x1)
            + base.ln_dpsi(q.x2)
            + pow_ln(t1 + t3 - 1.0, base.ln_psi(q.x1))
            + pow_ln(t2 - 1.0, base.ln_psi(q.x2));
    }
    let c_above = (t1 * (t2 + t3)).ln();
    for &i in s.above() {
        let q = pairs[i];
        total += c_above
            + base.ln_dpsi(q.x1)
            + base.ln_dpsi(q.x2)
            + pow_ln(t1 - 1.0, base.ln_psi(q.x1))
            + pow_ln(t2 + t3 - 1.0, base.ln_psi(q.x2));
    }
    let c_diag = t3.ln();
    let sum = t1 + t2 + t3;
    for &i in s.diagonal() {
        let x = diagonal_coordinate(pairs[i]);
        total += c_diag + base.ln_dpsi(x) + pow_ln(sum - 1.0, base.ln_psi(x));
    }
    if total.is_finite() {
        total
    } else {
        f64::NEG_INFINITY
    }
}

/// Tied pairs are evaluated at their midpoint, which is the common value for exact ties.
fn diagonal_coordinate(q: BivariatePoint) -> f64 {
    0.5 * (q.x1 + q.x2)
}

/// Same value as [`log_likelihood`], summed point by point through the joint density.
pub fn log_likelihood_pointwise(p: &BegledParams, s: &PartitionedSample) -> Result<f64> {
    let mut total = 0.0;
    for (q, region) in s.classified() {
        let q = if region == Region::Diagonal {
            let x = diagonal_coordinate(q);
            BivariatePoint::new(x, x)?
        } else {
            q
        };
        total += p.ln_joint_pdf(q, region)?;
    }
    Ok(total)
}

/// `ln Psi` and the partial derivatives of `ln Psi` and `ln Psi'` in `(alpha, a, b)`.
struct CoordinateTerms {
    ln_psi: f64,
    d_ln_psi: [f64; 3],
    d_ln_dpsi: [f64; 3],
}

fn coordinate_terms(base: &Baseline, x: f64) -> CoordinateTerms {
    let (alpha, a, b) = (base.alpha(), base.a(), base.b());
    let eta = base.eta_raw(x);
    let ln_eta = eta.ln();
    let s = (alpha * ln_eta).exp();
    let rate = a + b * x;
    let ds = [s * ln_eta, alpha * s / eta * x, alpha * s / eta * 0.5 * x * x];
    let dpsi_ds = 1.0 / s.exp_m1();
    CoordinateTerms {
        ln_psi: ln_one_minus_exp_neg(s),
        d_ln_psi: ds.map(|d| d * dpsi_ds),
        d_ln_dpsi: [
            1.0 / alpha + ln_eta - ds[0],
            1.0 / rate + (alpha - 1.0) * x / eta - ds[1],
            x / rate + (alpha - 1.0) * 0.5 * x * x / eta - ds[2],
        ],
    }
}

/// Accumulates `ln Psi'(x) + coef * ln Psi(x)` and its baseline gradient.
fn add_coordinate(grad: &mut [f64; 6], c: &CoordinateTerms, coef: f64) {
    for k in 0..3 {
        grad[k] += c.d_ln_dpsi[k] + coef * c.d_ln_psi[k];
    }
}

/// Gradient of [`log_likelihood`] in `(alpha, a, b, theta1, theta2, theta3)`.
///
/// Every parameter must be strictly positive, including `a` and `b`.
pub fn score(p: &BegledParams, s: &PartitionedSample) -> Result<[f64; 6]> {
    if !(p.a() > 0.0 && p.b() > 0.0) {
        return Err(Error::Boundary(format!(
            "score needs an interior point, got a={}, b={}",
            p.a(),
            p.b()
        )));
    }
    let g = score_unchecked(p, s);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("score is not finite: {g:?}")));
    }
    Ok(g)
}

pub(crate) fn score_unchecked(p: &BegledParams, s: &PartitionedSample) -> [f64; 6] {
    let base = p.baseline();
    let (t1, t2, t3) = (p.theta1(), p.theta2(), p.theta3());
    let pairs = s.pairs();
    let mut g = [0.0; 6];

    for &i in s.below() {
        let q = pairs[i];
        let c1 = coordinate_terms(base, q.x1);
        let c2 = coordinate_terms(base, q.x2);
        add_coordinate(&mut g, &c1, t1 + t3 - 1.0);
        add_coordinate(&mut g, &c2, t2 - 1.0);
        g[3] += 1.0 / (t1 + t3) + c1.ln_psi;
        g[4] += 1.0 / t2 + c2.ln_psi;
        g[5] += 1.0 / (t1 + t3) + c1.ln_psi;
    }
    for &i in s.above() {
        let q = pairs[i];
        let c1 = coordinate_terms(base, q.x1);
        let c2 = coordinate_terms(base, q.x2);
        add_coordinate(&mut g, &c1, t1 - 1.0);
        add_coordinate(&mut g, &c2, t2 + t3 - 1.0);
        g[3] += 1.0 / t1 + c1.ln_psi;
        g[4] += 1.0 / (t2 + t3) + c2.ln_psi;
        g[5] += 1.0 / (t2 + t3) + c2.ln_psi;
    }
    let sum = t1 + t2 + t3;
    for &i in s.diagonal() {
        let c = coordinate_terms(base, diagonal_coordinate(pairs[i]));
        add_coordinate(&mut g, &c, sum - 1.0);
        g[3] += c.ln_psi;
        g[4] += c.ln_psi;
        g[5] += 1.0 / t3 + c.ln_psi;
    }
    g
}

/// `sum ln f(x_i)` for one univariate sample; `-inf` when any term is undefined.
pub fn marginal_log_likelihood(p: &EgledParams, xs: &[f64]) -> f64 {
    let mut total = 0.0;
    for &x in xs {
        match p.ln_pdf(x) {
            Ok(v) => total += v,
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    if total.is_finite() {
        total
    } else {
        f64::NEG_INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::sample::partition_sample;
    use crate::numerics::diff::fd_gradient;
    use crate::numerics::rng::RandomStream;

    fn sample(p: &BegledParams, n: usize, seed: u64) -> PartitionedSample {
        partition_sample(&p.sample(n, &mut RandomStream::new(seed, 0)), 0.0).unwrap()
    }

    #[test]
    fn branch_sum_matches_pointwise() {
        let p = BegledParams::new(1.5, 0.5, 0.7, 0.8, 1.2, 1.3).unwrap();
        let s = sample(&p, 300, 2);
        assert!(s.counts().iter().all(|&c| c > 0));
        let a = log_likelihood(&p, &s);
        let b = log_likelihood_pointwise(&p, &s).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn score_matches_finite_differences() {
        let truth = BegledParams::new(1.3, 0.4, 0.9, 0.6, 1.1, 0.9).unwrap();
        let s = sample(&truth, 150, 4);
        let at = BegledParams::new(1.1, 0.6, 0.5, 0.9, 0.8, 1.4).unwrap();
        let g = score(&at, &s).unwrap();
        let fd = fd_gradient(
            |v| log_likelihood(&BegledParams::from_array([v[0], v[1], v[2], v[3], v[4], v[5]]).unwrap(), &s),
            &at.to_array(),
        )
        .unwrap();
        for k in 0..6 {
            assert!(((g[k] - fd[k]) / fd[k].abs().max(1.0)).abs() < 1e-5, "k={k}: {} vs {}", g[k], fd[k]);
        }
    }

    #[test]
    fn theta2_partial_with_only_above_pairs() {
        let p = BegledParams::new(1.2, 0.7, 0.3, 0.5, 0.9, 0.4).unwrap();
        let pts: Vec<BivariatePoint> = [(2.0, 1.0), (1.5, 0.3), (0.9, 0.2)]
            .iter()
            .map(|&(a, b)| BivariatePoint::new(a, b).unwrap())
            .collect();
        let s = partition_sample(&pts, 0.0).unwrap();
        assert_eq!(s.counts(), [0, 3, 0]);
        let g = score(&p, &s).unwrap();
        let expected = 3.0 / (0.9 + 0.4) + pts.iter().map(|q| p.baseline().ln_psi(q.x2)).sum::<f64>();
        assert!((g[4] - expected).abs() < 1e-12);
    }

    #[test]
    fn boundary_score_is_rejected() {
        let p = BegledParams::new(1.0, 0.7, 0.0, 0.5, 0.9, 0.4).unwrap();
        let s = partition_sample(&[BivariatePoint::new(1.0, 2.0).unwrap()], 0.0).unwrap();
        assert!(matches!(score(&p, &s), Err(Error::Boundary(_))));
    }

    #[test]
    fn order_invariance() {
        let p = BegledParams::new(1.5, 0.5, 0.7, 0.8, 1.2, 1.3).unwrap();
        let pts = p.sample(50, &mut RandomStream::new(8, 0));
        let mut rev = pts.clone();
        rev.reverse();
        let a = log_likelihood(&p, &partition_sample(&pts, 0.0).unwrap());
        let b = log_likelihood(&p, &partition_sample(&rev, 0.0).unwrap());
        assert!((a - b).abs() < 1e-10 * a.abs());
    }
}
