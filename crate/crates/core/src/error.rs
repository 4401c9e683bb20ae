use std::path::PathBuf;

use thiserror::Error;

use crate::series::Branch;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {requested} digits is below the minimum of {minimum}")]
    PrecisionTooLow { requested: u32, minimum: u32 },

    #[error("recurrence denominator vanished at m = {m}: |2(m+8) - (m+1)a1| = {magnitude}")]
    VanishingDenominator { m: usize, magnitude: String },

    #[error("coefficient a_{m} = {value} violates positivity on the minus branch")]
    NonPositiveCoefficient { m: usize, value: String },

    #[error("ratio a_{n_next}/a_{n} = {value} is outside (0, 1) on the minus branch", n_next = n + 1)]
    RatioOutOfRange { n: usize, value: String },

    #[error("index {index} is beyond the computed range (n_max = {n_max})")]
    IndexOutOfRange { index: usize, n_max: usize },

    #[error("division by zero: a_{index} = 0")]
    ZeroCoefficient { index: usize },

    #[error("operation needs the convergent branch, got {0}")]
    DivergentBranch(Branch),

    #[error("cache header mismatch on `{field}`: file has {found}, requested {expected}")]
    HeaderMismatch {
        field: &'static str,
        expected: String,
        found: String,
    },

    #[error("{path}:{line}: {reason}")]
    CorruptCache {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("cannot parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("ill-conditioned estimate at n = {n}: denominator lost all significant digits")]
    IllConditioned { n: usize },

    #[error("precision of {have} digits is too small for {target} certified digits (need {need})")]
    InsufficientPrecision { have: u32, target: u32, need: u32 },

    #[error("exact recurrence capped at m = {cap}, requested {requested}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("series terminates: nu = {nu} is a non-negative integer")]
    TerminatingSeries { nu: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
