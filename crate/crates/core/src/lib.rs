//! Majorana series for the Thomas-Fermi equation.
//!
//! The Thomas-Fermi boundary value problem `φ'' = x^(-1/2) φ^(3/2)`,
//! `φ(0) = 1`, `φ(∞) = 0` is mapped by Majorana's change of variables onto
//! the first-order equation `u' = 8(t u² - 1)/(1 - t² u)`, `u(1) = 1`. The
//! expansion `u(t) = Σ a_j (1 - t)^j` converges at `t = 0`, and the slope at
//! origin is `φ'(0) = -(3/16)^(1/3) u(0)`.
//!
//! This crate computes the coefficients `a_j` to any precision
//! ([`series`]), turns partial sums into certified slope digits
//! ([`slope`]), estimates the location and exponent of the nearest
//! singularity of `u` ([`singularity`]), and carries independent oracles for
//! all of the above ([`oracle`]).
//!
//! The numerical core is generic over [`scalar::Field`] / [`scalar::Real`];
//! the aliases below fix the working scalar to [`BigReal`].

pub mod error;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod series;
pub mod singularity;
pub mod slope;

pub use error::{Error, Result};
pub use scalar::{BigReal, Field, PrecisionContext, Real};
pub use series::{select_a1, Branch, CoefficientSeries, Summation};

/// Majorana series at arbitrary precision.
pub type Series = CoefficientSeries<BigReal>;
/// Slope estimate at arbitrary precision.
pub type Slope = slope::SlopeEstimate<BigReal>;
/// One Table-1 style row at arbitrary precision.
pub type Estimate = singularity::SingularityEstimate<BigReal>;
/// Least-squares ratio fit at arbitrary precision.
pub type Fit = singularity::RatioFit<BigReal>;
/// Bracket on the singularity location at arbitrary precision.
pub type Bracket = singularity::BracketResult<BigReal>;
/// Synthetic algebraic-singularity series at arbitrary precision.
pub type Synthetic = oracle::SyntheticSeries<BigReal>;

/// `f64` variants for quick, short-range work.
pub mod f64 {
    pub type Series = super::CoefficientSeries<f64>;
    pub type Estimate = super::singularity::SingularityEstimate<f64>;
    pub type Synthetic = super::oracle::SyntheticSeries<f64>;
}

/// Exact variants over ℚ (synthetic family) and ℚ(√73) (Majorana series).
pub mod exact {
    pub type Rational = rug::Rational;
    pub type Synthetic = super::oracle::SyntheticSeries<rug::Rational>;
    pub type Series = super::CoefficientSeries<super::oracle::ExactCoefficient>;
}
