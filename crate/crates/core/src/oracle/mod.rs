//! Independent checks for the floating-point pipeline.
//!
//! - [`exact_recurrence`]: the coefficients in exact ℚ(√73) arithmetic.
//! - [`synthetic_coefficients`]: series with a known algebraic singularity,
//!   on which the singularity estimators must be exact.
//! - [`majorana_transform`] and [`ode_residual`]: the change of variables and
//!   the first-order equation the series must satisfy.

mod exact;
mod synthetic;
mod transform;

use serde::Serialize;

pub use exact::{exact_recurrence, exact_recurrence_with, ExactCoefficient, EXACT_CAP};
pub use synthetic::{synthetic_coefficients, synthetic_ratio, SyntheticSeries};
pub use transform::{majorana_transform, ode_residual};

use crate::error::{Error, Result};
use crate::scalar::{agreement_digits, relative_threshold, BigReal, Field, PrecisionContext};
use crate::series::{Branch, CoefficientSeries};
use crate::singularity::{constrained_tau, hunter_guerrieri};

/// Digits below working precision tolerated by [`compare_with_exact`].
pub const ORACLE_SLACK_DIGITS: u32 = 10;

#[derive(Debug, Clone, Serialize)]
pub struct IndexAgreement {
    pub index: usize,
    pub digits: f64,
}

/// Per-index agreement between a floating-point series and the exact oracle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleComparison {
    pub threshold_digits: f64,
    pub minimum_digits: f64,
    pub worst_index: usize,
    pub pass: bool,
    pub per_index: Vec<IndexAgreement>,
}

/// Compares `a_0 … a_{m_max}` against [`exact_recurrence`]; passes when every
/// index agrees to at least `P - 10` significant digits.
pub fn compare_with_exact(
    series: &CoefficientSeries<BigReal>,
    m_max: usize,
) -> Result<OracleComparison> {
    if series.branch() != Branch::Minus {
        return Err(Error::DivergentBranch(series.branch()));
    }
    let m_max = m_max.min(series.n_max());
    let exact = exact_recurrence(m_max)?;
    let ctx = *series.context();
    let reference_ctx = ctx.with_extra_digits(ORACLE_SLACK_DIGITS);
    let cap = f64::from(reference_ctx.decimal_digits());

    let per_index: Vec<IndexAgreement> = exact
        .iter()
        .zip(series.coeffs())
        .enumerate()
        .map(|(index, (e, a))| IndexAgreement {
            index,
            digits: agreement_digits(a, &e.to_bigreal(&reference_ctx), cap),
        })
        .collect();
    let worst = per_index
        .iter()
        .min_by(|x, y| x.digits.total_cmp(&y.digits))
        .expect("at least a_0 is compared");
    let threshold_digits = f64::from(ctx.decimal_digits() - ORACLE_SLACK_DIGITS);
    Ok(OracleComparison {
        threshold_digits,
        minimum_digits: worst.digits,
        worst_index: worst.index,
        pass: worst.digits >= threshold_digits,
        per_index,
    })
}

/// Largest relative errors of the estimators on a synthetic series.
#[derive(Debug, Clone, Serialize)]
pub struct SyntheticCheck {
    pub n_lo: usize,
    pub n_hi: usize,
    pub max_tau0_rel_error: f64,
    pub max_nu_rel_error: f64,
    /// Only measured when `ν = 1/2`.
    pub max_constrained_rel_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

fn relative_error<T: Field>(x: &T, reference: &T) -> f64 {
    let diff = x.clone() - reference.clone();
    if diff.is_zero() {
        return 0.0;
    }
    10f64.powf(diff.log10_abs() - reference.log10_abs())
}

/// Runs both estimators over `n_lo..=n_hi` of the synthetic series for
/// `(A, x₀, ν)` and checks them against the exact parameters with
/// relative tolerance `10^(8 - P)`.
pub fn check_synthetic_estimators(
    amplitude: &BigReal,
    x0: &BigReal,
    nu: &BigReal,
    n_lo: usize,
    n_hi: usize,
    ctx: &PrecisionContext,
) -> Result<SyntheticCheck> {
    let series = synthetic_coefficients(amplitude.clone(), x0.clone(), nu.clone(), n_hi + 1)?;
    let half = BigReal::from_ratio(1, 2, ctx);
    let check_constrained = *nu == half;
    let tolerance = relative_threshold::<BigReal>(ctx, 8).to_f64();

    let mut max_tau = 0f64;
    let mut max_nu = 0f64;
    let mut max_constrained = 0f64;
    for n in n_lo.max(2)..=n_hi {
        let (tau, nu_n) = hunter_guerrieri(series.coeffs(), n)?;
        max_tau = max_tau.max(relative_error(&tau, x0));
        max_nu = max_nu.max(relative_error(&nu_n, nu));
        if check_constrained {
            let c = constrained_tau(series.coeffs(), n)?;
            max_constrained = max_constrained.max(relative_error(&c, x0));
        }
    }
    let max_constrained_rel_error = check_constrained.then_some(max_constrained);
    let pass = max_tau <= tolerance
        && max_nu <= tolerance
        && max_constrained_rel_error.is_none_or(|e| e <= tolerance);
    Ok(SyntheticCheck {
        n_lo: n_lo.max(2),
        n_hi,
        max_tau0_rel_error: max_tau,
        max_nu_rel_error: max_nu,
        max_constrained_rel_error,
        tolerance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_oracle_matches_forty_digit_series() {
        let mut s = CoefficientSeries::<BigReal>::new(Branch::Minus, PrecisionContext::new(40).unwrap());
        s.extend_to(60).unwrap();
        let report = compare_with_exact(&s, 60).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.per_index.len(), 61);
        assert!(report.minimum_digits >= 30.0);
    }

    #[test]
    fn synthetic_check_passes_for_square_root() {
        let c = PrecisionContext::new(40).unwrap();
        let check = check_synthetic_estimators(
            &BigReal::one(&c),
            &BigReal::from_i64(2, &c),
            &BigReal::from_ratio(1, 2, &c),
            2,
            100,
            &c,
        )
        .unwrap();
        assert!(check.pass, "{check:?}");
        assert!(check.max_constrained_rel_error.is_some());
    }
}
