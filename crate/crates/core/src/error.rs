use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: expected {expected}")]
    InvalidParam {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("lattice of side {side} needs {expected} cells, got {actual}")]
    LatticeShape {
        side: usize,
        expected: usize,
        actual: usize,
    },

    #[error("series is empty")]
    EmptySeries,

    #[error("series of length {len} is too short: need at least {needed}")]
    TooShort { len: usize, needed: usize },

    #[error("lag {tau} must be at least 1 and below the series length {len}")]
    BadLag { tau: usize, len: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("invalid histogram range [{lo}, {hi}]")]
    BadRange { lo: f64, hi: f64 },

    #[error("bin edges must be strictly increasing")]
    BadEdges,

    #[error("value {value} at lag {lag} is not strictly positive; cannot take its logarithm")]
    NonPositive { lag: i64, value: f64 },

    #[error("fit range [{lo}, {hi}] is not covered by the series or has fewer than two points")]
    BadFitRange { lo: i64, hi: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
