//! Sample partitioning, likelihood, maximum-likelihood fits and model selection.

pub mod fit;
pub mod gof;
pub mod likelihood;
pub mod models;
mod optimize;
pub mod sample;
pub mod selection;

pub use fit::{fit_marginal, fit_mle, heuristic_start, FitConfig, FitResult, MarginalFit};
pub use gof::{edf_statistics, gof_marginal, modified_statistics, GofResult};
pub use likelihood::{log_likelihood, log_likelihood_pointwise, marginal_log_likelihood, score};
pub use models::{BivariateModel, MarginalModel};
pub use sample::{partition_sample, PartitionedSample};
pub use selection::{
    information_criteria, likelihood_ratio_test, lrt_from_losses, marginal_likelihood_ratio_test, IcSet, LrtResult,
};
