//! Location `τ₀` and exponent `ν` of the singularity of `u` nearest to
//! `τ = 0`.
//!
//! For coefficients of `A(1 - τ/τ₀)^ν` the ratio `a_{n+1}/a_n` is exactly
//! linear in `1/(n+1)`, and three consecutive coefficients determine `τ₀`
//! and `ν`. Applied to the Majorana coefficients these give sequences that
//! converge slowly to the true values; [`aitken`] accelerates them and
//! [`bounds_bracket`] turns the two monotone `τ₀` columns into an interval.

mod aitken;
mod bracket;
mod estimators;
mod fit;

pub use aitken::{aitken, AitkenOutcome};
pub use bracket::{
    bounds_bracket, bracket_from_rows, BracketReport, BracketResult, Column,
    MonotonicityViolation,
};
pub use estimators::{
    constrained_tau, estimate_at, estimate_table, hunter_guerrieri, EstimateRow,
    SingularityEstimate,
};
pub use fit::{ratio_line_fit, RatioFit};

/// Table-1 grid: every 1000th index from 400000 to 441000.
pub fn table_grid() -> Vec<usize> {
    (400..=441).map(|k| k * 1000).collect()
}

/// Default number of trailing entries fed to Aitken.
pub const DEFAULT_AITKEN_WINDOW: usize = 15;
