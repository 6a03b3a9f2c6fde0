//! Exponentiated generalized linear exponential (EGLE) lifetimes and their
//! Marshall–Olkin bivariate extension.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: quadrature, special functions, the simplex optimizer,
//!   finite differences and the counter-based random stream.
//! - [`egled`]: the univariate family `F(x) = (1 - exp(-eta(x)^alpha))^theta`
//!   with `eta(x) = a x + b x^2 / 2`.
//! - [`begled`]: the bivariate model `X_k = max(U_k, U_3)` built from three
//!   independent EGLE shocks, including its singular diagonal component.
//! - [`reliability`]: stress–strength, joint survival, hazards, mean waiting
//!   times and the parallel-system vectors.
//! - [`estimation`]: partitioned likelihood, score, maximum likelihood fits,
//!   information criteria, likelihood-ratio tests and marginal goodness of fit.
//! - [`experiments`]: data ingestion, the embedded UEFA data set, the data
//!   analysis pipeline and the Monte Carlo recovery study used by the CLI.

pub mod begled;
pub mod egled;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod numerics;
pub mod reliability;

pub use begled::{BegledParams, BivariatePoint, Region};
pub use egled::{Baseline, EgledParams};
pub use error::{Error, Result};
pub use numerics::rng::RandomStream;
