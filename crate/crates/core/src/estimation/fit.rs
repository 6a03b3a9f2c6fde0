use serde::Serialize;

use crate::begled::BegledParams;
use crate::egled::EgledParams;
use crate::error::{Error, Result};

use super::likelihood::{log_likelihood, marginal_log_likelihood, score_unchecked};
use super::models::{BivariateModel, MarginalModel};
use super::optimize::{jittered_starts, minimize, polish, Outcome};
use super::sample::PartitionedSample;
use crate::numerics::diff::fd_gradient;

/// Stream id reserved for start jitter, kept away from the ids used for data.
pub const JITTER_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Number of starting points: the heuristic plus `starts - 1` jitters.
    pub starts: usize,
    pub seed: u64,
    pub jitter_stream: u64,
    pub max_iter: usize,
    /// Simplex diameter (log space) required for convergence.
    pub diam_tol: f64,
    /// Largest change in `-L` between restarts accepted as converged.
    pub loss_tol: f64,
    /// Lower clamp applied to every free parameter.
    pub clamp: f64,
    /// Run a gradient refinement with the analytic score after the simplex.
    pub polish: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            starts: 8,
            seed: 0,
            jitter_stream: JITTER_STREAM,
            max_iter: 20_000,
            diam_tol: 1e-8,
            loss_tol: 1e-9,
            clamp: 1e-8,
            polish: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: BivariateModel,
    pub params: BegledParams,
    pub neg_log_lik: f64,
    pub converged: bool,
    /// Some free parameter sits at the lower clamp.
    pub boundary: bool,
    pub iterations: usize,
    pub evaluations: usize,
    pub failed_starts: usize,
    pub n: usize,
    pub partition: [usize; 3],
}

impl FitResult {
    pub fn k(&self) -> usize {
        self.model.k()
    }

    /// `(name, value)` for each free parameter.
    pub fn free_params(&self) -> Vec<(&'static str, f64)> {
        self.model
            .free_names()
            .iter()
            .copied()
            .zip(self.model.free_values(&self.params))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalFit {
    pub model: MarginalModel,
    pub params: EgledParams,
    pub neg_log_lik: f64,
    pub converged: bool,
    pub boundary: bool,
    pub iterations: usize,
    pub n: usize,
}

impl MarginalFit {
    pub fn k(&self) -> usize {
        self.model.k()
    }

    pub fn free_params(&self) -> Vec<(&'static str, f64)> {
        self.model
            .free_names()
            .iter()
            .copied()
            .zip(self.model.free_values(&self.params))
            .collect()
    }
}

fn check_column(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Argument("cannot fit an empty sample".into()));
    }
    if let Some(x) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Argument(format!("lifetimes must be finite and > 0, got {x}")));
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Heuristic start for a univariate fit: exponential rate from the mean, a
/// quadratic term worth a tenth of the linear one at the mean, unit shapes.
fn marginal_heuristic(model: MarginalModel, mean: f64) -> Vec<f64> {
    let a = 1.0 / mean;
    let b = 0.2 / (mean * mean);
    match model {
        MarginalModel::Exponential => vec![a],
        MarginalModel::GenExponential => vec![a, 1.0],
        MarginalModel::Glfr => vec![a, b, 1.0],
        MarginalModel::Egle => vec![1.0, a, b, 1.0],
    }
}

/// Maximum-likelihood fit of one univariate family.
pub fn fit_marginal(xs: &[f64], model: MarginalModel, config: &FitConfig) -> Result<MarginalFit> {
    let mean = check_column(xs)?;
    if model == MarginalModel::Exponential {
        // Closed form: the rate is the reciprocal sample mean.
        let params = model.expand(&[1.0 / mean])?;
        return Ok(MarginalFit {
            model,
            params,
            neg_log_lik: -marginal_log_likelihood(&params, xs),
            converged: true,
            boundary: false,
            iterations: 0,
            n: xs.len(),
        });
    }
    let neg = |free: &[f64]| match model.expand(free) {
        Ok(p) => -marginal_log_likelihood(&p, xs),
        Err(_) => f64::INFINITY,
    };
    let starts = jittered_starts(&marginal_heuristic(model, mean), config);
    let mut out = minimize(neg, &starts, config)?;
    if config.polish && !out.boundary {
        let vg = |free: &[f64]| {
            let f = neg(free);
            let g = fd_gradient(neg, free).ok()?;
            Some((f, g))
        };
        apply_polish(&mut out, vg, config);
    }
    Ok(MarginalFit {
        model,
        params: model.expand(&out.values)?,
        neg_log_lik: out.neg_log_lik,
        converged: out.converged,
        boundary: out.boundary,
        iterations: out.iterations,
        n: xs.len(),
    })
}

fn apply_polish<F>(out: &mut Outcome, value_grad: F, config: &FitConfig)
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let (x, f) = polish(value_grad, &out.values, config.clamp);
    if f < out.neg_log_lik {
        out.values = x;
        out.neg_log_lik = f;
    }
}

/// Start built from the margins: fit each column under the matching
/// univariate family, average the shared `(alpha, a, b)` geometrically and
/// split each marginal shape evenly between its own theta and theta3.
pub fn heuristic_start(s: &PartitionedSample, model: BivariateModel, config: &FitConfig) -> Result<BegledParams> {
    let quick = FitConfig { starts: 1, ..*config };
    let m1 = fit_marginal(&s.column(1), model.marginal_model(), &quick)?.params;
    let m2 = fit_marginal(&s.column(2), model.marginal_model(), &quick)?.params;
    let geo = |u: f64, v: f64| if u > 0.0 && v > 0.0 { (u * v).sqrt() } else { 0.5 * (u + v) };
    let (alpha, a, b) = (geo(m1.alpha(), m2.alpha()), geo(m1.a(), m2.a()), geo(m1.b(), m2.b()));
    let (t1, t2) = (m1.theta(), m2.theta());
    let b = if model == BivariateModel::Bvge { 0.0 } else { b.max(config.clamp) };
    BegledParams::new(alpha, a.max(config.clamp), b, 0.5 * t1, 0.5 * t2, 0.25 * (t1 + t2))
}

/// Maximum-likelihood fit of a bivariate model.
///
/// `init` replaces the heuristic start when given; the jittered starts are
/// drawn around whichever is used.
pub fn fit_mle(
    s: &PartitionedSample,
    model: BivariateModel,
    init: Option<&BegledParams>,
    config: &FitConfig,
) -> Result<FitResult> {
    let centre = match init {
        Some(p) => *p,
        None => heuristic_start(s, model, config).or_else(|_| fallback_start(s, model))?,
    };
    let neg = |free: &[f64]| match model.expand(free) {
        Ok(p) => -log_likelihood(&p, s),
        Err(_) => f64::INFINITY,
    };
    let starts = jittered_starts(&model.free_values(&centre), config);
    let mut out = minimize(neg, &starts, config)?;
    if config.polish && !out.boundary {
        let vg = |free: &[f64]| {
            let p = model.expand(free).ok()?;
            let f = -log_likelihood(&p, s);
            let full = score_unchecked(&p, s).map(|v| -v);
            let g = match model {
                BivariateModel::Begled => full.to_vec(),
                BivariateModel::Bglfr => full[1..].to_vec(),
                BivariateModel::Bvge => vec![full[1], full[3], full[4], full[5]],
            };
            Some((f, g))
        };
        apply_polish(&mut out, vg, config);
    }
    Ok(FitResult {
        model,
        params: model.expand(&out.values)?,
        neg_log_lik: out.neg_log_lik,
        converged: out.converged,
        boundary: out.boundary,
        iterations: out.iterations,
        evaluations: out.evaluations,
        failed_starts: out.failed_starts,
        n: s.len(),
        partition: s.counts(),
    })
}

fn fallback_start(s: &PartitionedSample, model: BivariateModel) -> Result<BegledParams> {
    let all: Vec<f64> = s.pairs().iter().flat_map(|p| [p.x1, p.x2]).collect();
    let mean = (all.iter().sum::<f64>() / all.len() as f64).max(f64::MIN_POSITIVE);
    let b = if model == BivariateModel::Bvge { 0.0 } else { 0.2 / (mean * mean) };
    BegledParams::new(1.0, 1.0 / mean, b, 1.0, 1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::sample::partition_sample;
    use crate::numerics::rng::RandomStream;

    #[test]
    fn exponential_margin_is_closed_form() {
        let xs = [1.0, 2.0, 3.0, 6.0];
        let f = fit_marginal(&xs, MarginalModel::Exponential, &FitConfig::default()).unwrap();
        assert!((f.params.a() - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.neg_log_lik - (4.0 * 3f64.ln() + 4.0)).abs() < 1e-12);
        assert!(fit_marginal(&[], MarginalModel::Egle, &FitConfig::default()).is_err());
    }

    #[test]
    fn marginal_fit_recovers_shape() {
        let truth = EgledParams::new(1.0, 0.8, 0.0, 2.5).unwrap();
        let xs = truth.sample(2000, &mut RandomStream::new(3, 0));
        let f = fit_marginal(&xs, MarginalModel::GenExponential, &FitConfig::default()).unwrap();
        assert!(f.converged);
        assert!((f.params.theta() - 2.5).abs() < 0.3, "{f:?}");
        assert!((f.params.a() - 0.8).abs() < 0.08, "{f:?}");
    }

    #[test]
    fn bivariate_fit_on_simulated_data() {
        let truth = BegledParams::new(1.5, 0.5, 0.7, 0.8, 1.2, 1.3).unwrap();
        let s = partition_sample(&truth.sample(400, &mut RandomStream::new(17, 0)), 0.0).unwrap();
        let cfg = FitConfig { starts: 3, ..FitConfig::default() };
        let f = fit_mle(&s, BivariateModel::Begled, None, &cfg).unwrap();
        assert!(f.converged, "{f:?}");
        assert!(f.neg_log_lik <= -log_likelihood(&truth, &s) + 1e-9);
        assert!((f.params.alpha() - 1.5).abs() < 0.3, "{f:?}");
        let restricted = fit_mle(&s, BivariateModel::Bvge, None, &cfg).unwrap();
        assert_eq!(restricted.params.alpha(), 1.0);
        assert_eq!(restricted.params.b(), 0.0);
        assert!(restricted.neg_log_lik >= f.neg_log_lik - 1e-6);
    }

    #[test]
    fn fits_are_deterministic() {
        let truth = BegledParams::new(1.2, 0.5, 0.3, 0.8, 1.2, 1.3).unwrap();
        let s = partition_sample(&truth.sample(60, &mut RandomStream::new(5, 0)), 0.0).unwrap();
        let cfg = FitConfig { starts: 2, ..FitConfig::default() };
        let a = fit_mle(&s, BivariateModel::Bglfr, None, &cfg).unwrap();
        let b = fit_mle(&s, BivariateModel::Bglfr, None, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
