use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A survival probability is numerically zero so a hazard-type ratio
    /// cannot be formed.
    #[error("survival probability underflows at {at}")]
    SaturatedSurvival { at: String },

    /// A distribution function is numerically zero so a reversed-hazard or
    /// waiting-time ratio cannot be formed.
    #[error("distribution function underflows at {at}")]
    DegenerateWindow { at: String },

    #[error("region {region} is inconsistent with point ({x1}, {x2})")]
    RegionMismatch { region: &'static str, x1: f64, x2: f64 },

    #[error("parameter vector is on the boundary: {0}")]
    Boundary(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {abs_error:e})"
    )]
    NonConvergence {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("simulation study failed: {0}")]
    Study(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
