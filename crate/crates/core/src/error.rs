use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("only {m} observations at or above the threshold, need at least {required}")]
    InsufficientExceedances { m: usize, required: usize },

    #[error("sample size {n} is too small, need at least {required}")]
    InsufficientSample { n: usize, required: usize },

    #[error("tail value {t} is not attained for tail index in [{lo:e}, {hi:e}]")]
    OutOfBracket { t: f64, lo: f64, hi: f64 },

    #[error("index {k} out of range 1..={max}")]
    IndexOutOfRange { k: usize, max: usize },

    #[error("survival function vanishes at threshold u = {u}")]
    DegenerateConditioning { u: f64 },

    #[error("threshold u = {u} leaves no probability mass for pairs")]
    DegenerateThreshold { u: f64 },

    #[error(
        "quadrature failed: {reason} (estimate {estimate:e}, error {error:e}, {intervals} intervals)"
    )]
    Quadrature {
        reason: &'static str,
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("bootstrap unstable: {dropped} of {reps} replicates had fewer than 2 exceedances")]
    UnstableBootstrap { dropped: usize, reps: usize },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
