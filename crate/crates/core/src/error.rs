use thiserror::Error;

/// Errors raised by the state constructions, metrics and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("degenerate chain: epsilon = delta = 0 has no unique stationary distribution")]
    DegenerateChain,

    #[error("{what} = {value} exceeds the limit of {limit}")]
    SizeCap {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("POVM is incomplete (max deviation from identity {0:e})")]
    IncompletePovm(f64),

    #[error("priors ({0}, {1}) must be nonnegative and sum to 1")]
    InvalidPriors(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

pub(crate) fn check_cap(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::SizeCap { what, value, limit })
    } else {
        Ok(())
    }
}
