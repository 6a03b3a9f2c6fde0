//! Shared numerical substrate.

pub mod diff;
pub mod quad;
pub mod rng;
pub mod simplex;
pub mod special;

pub use diff::fd_gradient;
pub use quad::{quad_2d_region, quad_finite, quad_semi_infinite, QuadConfig, QuadEstimate, Region2d};
pub use rng::RandomStream;
pub use simplex::{simplex_minimize, SimplexConfig, SimplexResult};
pub use special::{chi_square_sf, ln_gamma, regularized_upper_gamma, upper_incomplete_gamma};
