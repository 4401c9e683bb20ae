//! Slope at origin from partial sums of the Majorana series.
//!
//! `φ'_{0,N} = -(3/16)^(1/3) S_N` with `S_N = Σ_{j≤N} a_j`. On the minus
//! branch every `a_j > 0`, so `S_N` increases monotonically to `u(0)` and the
//! tail `S_∞ - S_N` is bounded by a geometric envelope on the ratios.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Field, PrecisionContext, Real};
use crate::series::{Branch, CoefficientSeries};

/// Upper envelope for `a_{n+1}/a_n` used by [`tail_bound`]: `0.85`, above the
/// limiting ratio `1/τ₀ ≈ 0.8322`.
pub const TAIL_RATIO_MARGIN: (i64, i64) = (85, 100);

/// Decay of `log10 a_n` per index, used to size the first attempt of
/// [`certified_slope`].
const DIGITS_PER_TERM: f64 = 0.0798;

/// Digits held back from certification, matching the guard in
/// [`PrecisionContext::for_slope_target`](crate::PrecisionContext::for_slope_target).
const GUARD_DIGITS: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeEstimate<T> {
    pub order: usize,
    pub partial_sum: T,
    pub slope: T,
    pub tail_bound: T,
    pub certified_digits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeReport {
    #[serde(rename = "N")]
    pub order: usize,
    pub slope: String,
    pub tail_bound: String,
    pub certified_digits: usize,
}

impl<T: Field> SlopeEstimate<T> {
    /// Report with the slope at `digits` significant digits and a two-digit
    /// tail bound.
    pub fn report(&self, digits: usize) -> SlopeReport {
        SlopeReport {
            order: self.order,
            slope: self.slope.to_sci_string(digits),
            tail_bound: self.tail_bound.to_sci_string(2),
            certified_digits: self.certified_digits,
        }
    }

    /// The slope rounded to its certified digits.
    pub fn certified_value(&self) -> String {
        self.slope.to_sci_string(self.certified_digits.max(1))
    }
}

/// `(3/16)^(1/3)`, rounded once.
pub fn slope_factor<T: Real>(ctx: &T::Context) -> T {
    T::cbrt_of_ratio(3, 16, ctx)
}

/// `S_N = Σ_{j≤N} a_j`, ascending.
pub fn partial_sum<T: Field>(series: &CoefficientSeries<T>, order: usize) -> Result<T> {
    series.coeff(order)?;
    let ctx = series.context();
    Ok(series.coeffs()[..=order]
        .iter()
        .fold(T::zero(ctx), |acc, a| acc + a.clone()))
}

/// `-(3/16)^(1/3) · S`.
pub fn slope_from_sum<T: Real>(sum: &T) -> T {
    -(slope_factor::<T>(&sum.context()) * sum.clone())
}

/// `a_{N+1} / (1 - r̂)` with `r̂ = max(a_{N+1}/a_N, 0.85)`.
///
/// Bounds `S_∞ - S_N` as long as every later ratio stays below `r̂`, which
/// the extension checks enforce up to the computed range.
pub fn tail_bound<T: Field>(series: &CoefficientSeries<T>, order: usize) -> Result<T> {
    if series.branch() != Branch::Minus {
        return Err(Error::DivergentBranch(series.branch()));
    }
    let ctx = series.context();
    let ratio = series.coefficient_ratio(order)?;
    let margin = T::from_ratio(TAIL_RATIO_MARGIN.0, TAIL_RATIO_MARGIN.1, ctx);
    let r_hat = if ratio > margin { ratio } else { margin };
    Ok(series.coeffs()[order + 1].clone() / (T::one(ctx) - r_hat))
}

/// Largest `k ≤ max_digits` such that `x` and `y` round to the same string at
/// every length `1..=k`.
pub fn agreeing_digits<T: Field>(x: &T, y: &T, max_digits: usize) -> usize {
    // Rounding is monotone, so agreement at a length implies every value
    // between x and y rounds the same way.
    let mut k = 0;
    while k < max_digits && x.to_sci_string(k + 1) == y.to_sci_string(k + 1) {
        k += 1;
    }
    k
}

fn certification_cap<T: Field>(ctx: &T::Context, order: usize) -> usize {
    T::decimal_digits(ctx)
        .map(|p| p.saturating_sub(decimal_width(order) + GUARD_DIGITS) as usize)
        .unwrap_or(usize::MAX)
}

/// Partial sum, slope, tail bound and certified digits at order `N`.
pub fn estimate_at<T: Real>(series: &CoefficientSeries<T>, order: usize) -> Result<SlopeEstimate<T>> {
    let partial_sum = partial_sum(series, order)?;
    let tail = tail_bound(series, order)?;
    let slope = slope_from_sum(&partial_sum);
    let slope_with_tail = slope_from_sum(&(partial_sum.clone() + tail.clone()));
    let cap = certification_cap::<T>(series.context(), order);
    let certified_digits = agreeing_digits(&slope, &slope_with_tail, cap);
    Ok(SlopeEstimate {
        order,
        partial_sum,
        slope,
        tail_bound: tail,
        certified_digits,
    })
}

fn first_order(target_digits: u32) -> usize {
    (f64::from(target_digits) / DIGITS_PER_TERM).ceil() as usize + 10
}

fn decimal_width(order: usize) -> u32 {
    (order.max(1) as f64).log10().ceil() as u32
}

/// Working precision that [`certified_slope`] accepts for `target_digits`.
pub fn slope_precision(target_digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::for_slope_target(target_digits, 2 * first_order(target_digits))
}

/// Extends `series` until the slope is certified to `target_digits`.
pub fn certified_slope<T: Real>(
    series: &mut CoefficientSeries<T>,
    target_digits: u32,
) -> Result<SlopeEstimate<T>> {
    if target_digits == 0 {
        return Err(Error::InvalidArgument("target_digits must be at least 1".into()));
    }
    if series.branch() != Branch::Minus {
        return Err(Error::DivergentBranch(series.branch()));
    }
    let mut order = first_order(target_digits);
    let need = |order: usize| target_digits + decimal_width(order) + GUARD_DIGITS;
    let have = T::decimal_digits(series.context());
    if let Some(have) = have {
        if have < need(2 * order) {
            return Err(Error::InsufficientPrecision {
                have,
                target: target_digits,
                need: need(2 * order),
            });
        }
    }
    loop {
        if let Some(have) = have {
            if have < need(order) {
                return Err(Error::InsufficientPrecision {
                    have,
                    target: target_digits,
                    need: need(order),
                });
            }
        }
        series.extend_to(order + 1)?;
        let estimate = estimate_at(series, order)?;
        if estimate.certified_digits >= target_digits as usize {
            return Ok(estimate);
        }
        order += (order / 10).max(10);
    }
}
