//! Monte Carlo parameter-recovery study for the bivariate model.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::begled::BegledParams;
use crate::error::{Error, Result};
use crate::estimation::fit::JITTER_STREAM;
use crate::estimation::{fit_mle, partition_sample, BivariateModel, FitConfig};
use crate::numerics::rng::RandomStream;

/// Share of replications per sample size allowed to fail before the study is abandoned.
pub const FAILURE_BUDGET: f64 = 0.05;
pub const THREADS_ENV: &str = "MOGLIB_THREADS";

const NAMES: [&str; 6] = ["alpha", "a", "b", "theta1", "theta2", "theta3"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub name: String,
    pub truth: f64,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSizeSummary {
    pub n: usize,
    pub successes: usize,
    pub failures: usize,
    pub params: Vec<ParamSummary>,
}

impl SampleSizeSummary {
    pub fn param(&self, name: &str) -> Option<&ParamSummary> {
        self.params.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub truth: [f64; 6],
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub starts: usize,
    pub cells: Vec<SampleSizeSummary>,
}

impl SimulationReport {
    pub fn cell(&self, n: usize) -> Option<&SampleSizeSummary> {
        self.cells.iter().find(|c| c.n == n)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "replications {}  seed {}  starts {}",
            self.replications, self.seed, self.starts
        );
        let _ = writeln!(
            out,
            "{:>5} {:<8} {:>10} {:>11} {:>11} {:>11} {:>22}",
            "n", "param", "estimate", "bias", "var", "mse", "95% interval"
        );
        for c in &self.cells {
            for p in &c.params {
                let _ = writeln!(
                    out,
                    "{:>5} {:<8} {:>10.6} {:>11.7} {:>11.7} {:>11.7} ({:>9.4}, {:>9.4})",
                    c.n, p.name, p.mean, p.bias, p.variance, p.mse, p.ci_low, p.ci_high
                );
            }
            if c.failures > 0 {
                let _ = writeln!(out, "{:>5} failed fits: {}", c.n, c.failures);
            }
        }
        out
    }
}

/// Linear interpolation between order statistics; `sorted` must be ascending.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(name: &str, truth: f64, estimates: &[f64]) -> ParamSummary {
    let m = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / m;
    let variance = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / m;
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / m;
    let mut sorted = estimates.to_vec();
    sorted.sort_by(f64::total_cmp);
    ParamSummary {
        name: name.to_string(),
        truth,
        mean,
        bias: mean - truth,
        variance,
        mse,
        ci_low: percentile(&sorted, 0.025),
        ci_high: percentile(&sorted, 0.975),
    }
}

/// Worker count: `MOGLIB_THREADS` when set, otherwise the available parallelism.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => cap,
        _ => available,
    }
}

fn replicate(truth: &BegledParams, n: usize, r: usize, seed: u64, config: &FitConfig) -> Option<[f64; 6]> {
    let mut rng = RandomStream::new(seed, r as u64);
    let s = partition_sample(&truth.sample(n, &mut rng), 0.0).ok()?;
    let cfg = FitConfig {
        seed,
        jitter_stream: JITTER_STREAM | r as u64,
        ..*config
    };
    let fit = fit_mle(&s, BivariateModel::Begled, None, &cfg).ok()?;
    fit.converged.then(|| fit.params.to_array())
}

/// Replication `r` draws its data from stream `r` of `seed`, so results do not
/// depend on how replications are spread over workers.
pub fn cmd_simulate(
    truth: &BegledParams,
    n_grid: &[usize],
    replications: usize,
    seed: u64,
    config: &FitConfig,
) -> Result<SimulationReport> {
    if replications == 0 {
        return Err(Error::Argument("simulation needs at least one replication".into()));
    }
    if n_grid.is_empty() || n_grid.contains(&0) {
        return Err(Error::Argument(format!("sample sizes must be positive, got {n_grid:?}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::Study(format!("cannot start worker pool: {e}")))?;
    let truth_values = truth.to_array();
    let mut cells = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let results: Vec<Option<[f64; 6]>> = pool.install(|| {
            (0..replications)
                .into_par_iter()
                .map(|r| replicate(truth, n, r, seed, config))
                .collect()
        });
        let ok: Vec<[f64; 6]> = results.iter().flatten().copied().collect();
        let failures = replications - ok.len();
        if failures as f64 > FAILURE_BUDGET * replications as f64 || ok.is_empty() {
            return Err(Error::Study(format!(
                "{failures} of {replications} fits failed at n = {n}, over the {:.0}% budget",
                FAILURE_BUDGET * 100.0
            )));
        }
        let params = (0..6)
            .map(|k| {
                let est: Vec<f64> = ok.iter().map(|e| e[k]).collect();
                summarize(NAMES[k], truth_values[k], &est)
            })
            .collect();
        cells.push(SampleSizeSummary {
            n,
            successes: ok.len(),
            failures,
            params,
        });
    }
    Ok(SimulationReport {
        truth: truth_values,
        n_grid: n_grid.to_vec(),
        replications,
        seed,
        starts: config.starts,
        cells,
    })
}
