use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::special::chi_square_sf;

use super::fit::{FitResult, MarginalFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcSet {
    pub aic: f64,
    pub caic: f64,
    pub hqic: f64,
}

impl IcSet {
    /// AIC, small-sample corrected AIC and Hannan-Quinn for `k` parameters and `n` observations.
    pub fn compute(neg_log_lik: f64, k: usize, n: usize) -> Result<IcSet> {
        if n <= k + 1 {
            return Err(Error::Argument(format!("CAIC needs n > k + 1 (n={n}, k={k})")));
        }
        let kf = k as f64;
        let nf = n as f64;
        let aic = 2.0 * kf + 2.0 * neg_log_lik;
        Ok(IcSet {
            aic,
            caic: aic + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0),
            hqic: 2.0 * kf * nf.ln().ln() + 2.0 * neg_log_lik,
        })
    }
}

pub fn information_criteria(fit: &FitResult, n: usize) -> Result<IcSet> {
    IcSet::compute(fit.neg_log_lik, fit.k(), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrtResult {
    pub lambda: f64,
    pub df: u32,
    pub p_value: f64,
}

/// Statistic `2 (negL_restricted - negL_full)` against chi-square with `df` degrees of freedom.
pub fn lrt_from_losses(full_neg_log_lik: f64, restricted_neg_log_lik: f64, df: u32) -> Result<LrtResult> {
    if restricted_neg_log_lik < full_neg_log_lik - 1e-6 {
        return Err(Error::Fit(format!(
            "restricted fit ({restricted_neg_log_lik}) beats the full fit ({full_neg_log_lik}); the full optimum was missed"
        )));
    }
    let lambda = (2.0 * (restricted_neg_log_lik - full_neg_log_lik)).max(0.0);
    Ok(LrtResult {
        lambda,
        df,
        p_value: chi_square_sf(lambda, df)?,
    })
}

pub fn likelihood_ratio_test(full: &FitResult, restricted: &FitResult) -> Result<LrtResult> {
    if !restricted.model.nested_in(full.model) {
        return Err(Error::Argument(format!(
            "{} is not nested in {}",
            restricted.model, full.model
        )));
    }
    lrt_from_losses(full.neg_log_lik, restricted.neg_log_lik, (full.k() - restricted.k()) as u32)
}

pub fn marginal_likelihood_ratio_test(full: &MarginalFit, restricted: &MarginalFit) -> Result<LrtResult> {
    if !restricted.model.nested_in(full.model) {
        return Err(Error::Argument(format!(
            "{} is not nested in {}",
            restricted.model, full.model
        )));
    }
    lrt_from_losses(full.neg_log_lik, restricted.neg_log_lik, (full.k() - restricted.k()) as u32)
}
