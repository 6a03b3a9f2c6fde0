use serde::Serialize;

use crate::egled::EgledParams;
use crate::error::{Error, Result};

use super::fit::{fit_marginal, FitConfig, MarginalFit};
use super::models::MarginalModel;

const PIT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    pub model: MarginalModel,
    pub fitted: EgledParams,
    pub neg_log_lik: f64,
    /// Modified Anderson-Darling statistic.
    pub a_star: f64,
    /// Modified Cramer-von Mises statistic.
    pub w_star: f64,
    /// Some transformed value had to be clamped away from 0 or 1.
    pub clamped: bool,
    pub fit: MarginalFit,
}

/// `A^2` and `W^2` of probability-integral transforms, sorted ascending.
pub fn edf_statistics(sorted_u: &[f64]) -> (f64, f64) {
    let n = sorted_u.len();
    let nf = n as f64;
    let mut a_sum = 0.0;
    let mut w2 = 1.0 / (12.0 * nf);
    for i in 0..n {
        let k = (2 * i + 1) as f64;
        a_sum += k * (sorted_u[i].ln() + (-sorted_u[n - 1 - i]).ln_1p());
        w2 += (sorted_u[i] - k / (2.0 * nf)).powi(2);
    }
    (-nf - a_sum / nf, w2)
}

/// Small-sample modified statistics `A*` and `W*` for data against a fitted law.
pub fn modified_statistics(xs: &[f64], fitted: &EgledParams) -> Result<(f64, f64, bool)> {
    if xs.is_empty() {
        return Err(Error::Argument("goodness of fit needs data".into()));
    }
    let mut clamped = false;
    let mut u: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let v = fitted.cdf(x);
            let c = v.clamp(PIT_CLAMP, 1.0 - PIT_CLAMP);
            clamped |= c != v;
            c
        })
        .collect();
    u.sort_by(f64::total_cmp);
    let (a2, w2) = edf_statistics(&u);
    let nf = xs.len() as f64;
    Ok((a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf)), w2 * (1.0 + 0.5 / nf), clamped))
}

/// Fits `model` to `xs` by maximum likelihood and scores the fit.
pub fn gof_marginal(xs: &[f64], model: MarginalModel, config: &FitConfig) -> Result<GofResult> {
    let fit = fit_marginal(xs, model, config)?;
    let (a_star, w_star, clamped) = modified_statistics(xs, &fit.params)?;
    Ok(GofResult {
        model,
        fitted: fit.params,
        neg_log_lik: fit.neg_log_lik,
        a_star,
        w_star,
        clamped,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_plotting_positions() {
        let n = 25;
        let u: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let (_, w2) = edf_statistics(&u);
        assert!((w2 - 1.0 / (12.0 * n as f64)).abs() < 1e-15);
    }

    #[test]
    fn anderson_darling_single_point() {
        // n = 1, u = 0.5: A^2 = -1 - (ln 0.5 + ln 0.5).
        let (a2, _) = edf_statistics(&[0.5]);
        assert!((a2 - (-1.0 - 2.0 * 0.5f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn clamping_is_flagged() {
        let p = EgledParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let (_, _, clamped) = modified_statistics(&[1e-20, 1.0, 2.0], &p).unwrap();
        assert!(clamped);
        assert!(modified_statistics(&[], &p).is_err());
    }
}
