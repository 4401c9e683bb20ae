//! Scalar abstraction.
//!
//! Everything that only needs field arithmetic (the coefficient recurrence,
//! the singularity estimators, Aitken's Δ², the synthetic series) is written
//! against [`Field`]. Operations that need roots or logarithms use [`Real`].
//!
//! Implementations:
//!
//! | Type | `Field` | `Real` | Notes |
//! |------|---------|--------|-------|
//! | `f32`, `f64` | yes | yes | quick checks, short ranges only |
//! | [`BigReal`] | yes | yes | MPFR-backed working scalar |
//! | `rug::Rational` | yes | no | exact, used for the synthetic family |
//! | [`ExactCoefficient`](crate::oracle::ExactCoefficient) | yes | no | exact ℚ(√73) |

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

mod bigreal;
mod float;
mod rational;

pub use bigreal::{BigReal, PrecisionContext, MIN_DECIMAL_DIGITS};

/// Ordered field arithmetic with an explicit precision context.
///
/// Constants are always built from a context because the working scalar
/// carries its precision with it; `f64` and exact types use `()`.
pub trait Field:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Context: Clone + fmt::Debug + PartialEq;

    fn context(&self) -> Self::Context;

    fn from_i64(value: i64, ctx: &Self::Context) -> Self;

    /// `num / den`, rounded once.
    fn from_ratio(num: i64, den: i64, ctx: &Self::Context) -> Self {
        Self::from_i64(num, ctx) / Self::from_i64(den, ctx)
    }

    fn zero(ctx: &Self::Context) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_i64(1, ctx)
    }

    fn is_zero(&self) -> bool;

    fn is_negative(&self) -> bool {
        *self < Self::zero(&self.context())
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Significant decimal digits carried by the context, `None` when exact.
    fn decimal_digits(ctx: &Self::Context) -> Option<u32>;

    /// `10^exp` in the context.
    fn pow10(exp: i64, ctx: &Self::Context) -> Self;

    /// `log10 |x|` as an `f64`, valid far outside the `f64` exponent range.
    fn log10_abs(&self) -> f64;

    fn to_f64(&self) -> f64;

    /// Scientific notation with `digits` significant digits and explicit
    /// signs, e.g. `+4.56e-1`.
    fn to_sci_string(&self, digits: usize) -> String;

    /// `Σ x·y` over `pairs`, accumulated left to right.
    fn sum_of_products<'a, I>(ctx: &Self::Context, pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
        Self: 'a,
    {
        pairs
            .into_iter()
            .fold(Self::zero(ctx), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    /// Storage rounding applied to every coefficient a series keeps.
    fn quantize(self) -> Self {
        self
    }
}

/// Field operations plus the transcendental functions the slope and the
/// change of variables need.
pub trait Real: Field {
    fn sqrt(&self) -> Self;

    fn cbrt(&self) -> Self;

    /// `self^exponent` for `self > 0`.
    fn powr(&self, exponent: &Self) -> Self;

    /// `(num/den)^(1/3)`, rounded once.
    fn cbrt_of_ratio(num: i64, den: i64, ctx: &Self::Context) -> Self {
        Self::from_ratio(num, den, ctx).cbrt()
    }
}

/// `10^(slack - P)`, the relative threshold used for "vanishing" checks.
/// Zero for exact scalars.
pub fn relative_threshold<T: Field>(ctx: &T::Context, slack_digits: i64) -> T {
    match T::decimal_digits(ctx) {
        Some(p) => T::pow10(slack_digits - p as i64, ctx),
        None => T::zero(ctx),
    }
}

/// Number of leading significant decimal digits on which `x` and `reference`
/// agree, measured as `-log10(|x - reference| / |reference|)` and capped at
/// `cap`.
pub fn agreement_digits<T: Field>(x: &T, reference: &T, cap: f64) -> f64 {
    let diff = x.clone() - reference.clone();
    if diff.is_zero() {
        return cap;
    }
    if reference.is_zero() {
        return 0.0;
    }
    (reference.log10_abs() - diff.log10_abs()).clamp(0.0, cap)
}
