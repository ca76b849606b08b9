pub mod cli;
pub mod coverage_sim;
pub mod distributions;
pub mod error;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod tail_math;
pub mod ustat;
pub mod variance_ci;

pub use error::{Error, Result};
pub use distributions::DistributionSpec;
pub use rng::RngStream;
pub use ustat::{SortedSample, TailEstimate};
