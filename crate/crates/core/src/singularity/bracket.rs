use std::fmt;

use serde::Serialize;

use super::aitken::aitken;
use super::estimators::{estimate_table, SingularityEstimate};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Which estimator column broke the expected monotone trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    /// Expected strictly decreasing.
    Tau0Free,
    /// Expected strictly increasing.
    Tau0Constrained,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Column::Tau0Free => "tau0_free (expected decreasing)",
            Column::Tau0Constrained => "tau0_constrained (expected increasing)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub column: Column,
    /// Index of the row that failed to continue the trend.
    pub n: usize,
}

/// Bounds on `τ₀` from the two estimator columns.
///
/// The monotone trends behind the bounds are observed, not proven, so the
/// result carries a validity flag instead of assuming them.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketResult<T> {
    /// Largest constrained estimate.
    pub lower: T,
    /// Smallest free estimate.
    pub upper: T,
    pub accelerated_lower: T,
    pub accelerated_upper: T,
    pub nu_accelerated: T,
    pub monotonic: bool,
    pub violations: Vec<MonotonicityViolation>,
    /// Some Aitken pass stopped on a vanishing second difference.
    pub aitken_stopped_early: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketReport {
    pub lower: String,
    pub upper: String,
    pub accelerated_lower: String,
    pub accelerated_upper: String,
    pub nu_accelerated: String,
    pub monotonic: bool,
}

impl<T: Field> BracketResult<T> {
    pub fn report(&self, digits: usize) -> BracketReport {
        BracketReport {
            lower: self.lower.to_sci_string(digits),
            upper: self.upper.to_sci_string(digits),
            accelerated_lower: self.accelerated_lower.to_sci_string(digits),
            accelerated_upper: self.accelerated_upper.to_sci_string(digits),
            nu_accelerated: self.nu_accelerated.to_sci_string(digits),
            monotonic: self.monotonic,
        }
    }
}

fn check_trend<T: Field>(
    rows: &[SingularityEstimate<T>],
    column: Column,
    out: &mut Vec<MonotonicityViolation>,
) {
    for w in rows.windows(2) {
        let ok = match column {
            Column::Tau0Free => w[1].tau0_free < w[0].tau0_free,
            Column::Tau0Constrained => w[1].tau0_constrained > w[0].tau0_constrained,
        };
        if !ok {
            out.push(MonotonicityViolation { column, n: w[1].n });
        }
    }
}

/// Brackets from precomputed rows, which must be sorted by `n`.
pub fn bracket_from_rows<T: Field>(
    rows: &[SingularityEstimate<T>],
    aitken_window: usize,
    passes: usize,
) -> Result<BracketResult<T>> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no rows to bracket".into()));
    }
    if aitken_window > rows.len() {
        return Err(Error::InvalidArgument(format!(
            "Aitken window {aitken_window} exceeds the {} available rows",
            rows.len()
        )));
    }
    if rows.windows(2).any(|w| w[1].n <= w[0].n) {
        return Err(Error::InvalidArgument("rows must be sorted by strictly increasing n".into()));
    }

    let max_by = |f: fn(&SingularityEstimate<T>) -> &T, take_max: bool| {
        rows.iter()
            .map(f)
            .fold(None::<&T>, |best, x| match best {
                Some(b) if (take_max && b >= x) || (!take_max && b <= x) => Some(b),
                _ => Some(x),
            })
            .cloned()
            .expect("rows is non-empty")
    };
    let lower = max_by(|r| &r.tau0_constrained, true);
    let upper = max_by(|r| &r.tau0_free, false);

    let mut violations = Vec::new();
    check_trend(rows, Column::Tau0Free, &mut violations);
    check_trend(rows, Column::Tau0Constrained, &mut violations);

    let tail = &rows[rows.len() - aitken_window..];
    let column = |f: fn(&SingularityEstimate<T>) -> &T| tail.iter().map(f).cloned().collect::<Vec<_>>();
    let acc_lower = aitken(&column(|r| &r.tau0_constrained), passes)?;
    let acc_upper = aitken(&column(|r| &r.tau0_free), passes)?;
    let acc_nu = aitken(&column(|r| &r.nu_n), passes)?;

    Ok(BracketResult {
        lower,
        upper,
        accelerated_lower: acc_lower.last().clone(),
        accelerated_upper: acc_upper.last().clone(),
        nu_accelerated: acc_nu.last().clone(),
        monotonic: violations.is_empty(),
        violations,
        aitken_stopped_early: acc_lower.stopped_early || acc_upper.stopped_early || acc_nu.stopped_early,
    })
}

/// Lower bound `max τ₀,ₙ(ν=1/2)`, upper bound `min τ₀,ₙ(νₙ)` over
/// `n_values`, and Aitken extrapolations of the last `aitken_window` entries
/// of each column.
pub fn bounds_bracket<T: Field>(
    coeffs: &[T],
    n_values: &[usize],
    aitken_window: usize,
    passes: usize,
) -> Result<BracketResult<T>> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = estimate_table(coeffs, &ns)?;
    bracket_from_rows(&rows, aitken_window, passes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, free: f64, nu: f64, constrained: f64) -> SingularityEstimate<f64> {
        SingularityEstimate {
            n,
            tau0_free: free,
            nu_n: nu,
            tau0_constrained: constrained,
        }
    }

    #[test]
    fn bounds_and_trends() {
        let rows: Vec<_> = (0..6)
            .map(|k| {
                let e = 0.5f64.powi(k);
                row(10 + k as usize, 1.2 + e, 0.5 - e, 1.2 - e)
            })
            .collect();
        let b = bracket_from_rows(&rows, 5, 1).unwrap();
        assert!(b.monotonic);
        assert_eq!(b.lower, 1.2 - 1.0 / 32.0);
        assert_eq!(b.upper, 1.2 + 1.0 / 32.0);
        assert!((b.accelerated_lower - 1.2).abs() < 1e-14);
        assert!((b.accelerated_upper - 1.2).abs() < 1e-14);
        assert!((b.nu_accelerated - 0.5).abs() < 1e-14);
    }

    #[test]
    fn violation_names_the_column() {
        let rows = vec![
            row(1, 2.0, 0.4, 1.0),
            row(2, 1.9, 0.45, 1.1),
            row(3, 1.95, 0.47, 1.05),
        ];
        let b = bracket_from_rows(&rows, 3, 1).unwrap();
        assert!(!b.monotonic);
        assert_eq!(
            b.violations,
            vec![
                MonotonicityViolation { column: Column::Tau0Free, n: 3 },
                MonotonicityViolation { column: Column::Tau0Constrained, n: 3 },
            ]
        );
    }

    #[test]
    fn rejects_oversized_window() {
        let rows = vec![row(1, 2.0, 0.4, 1.0), row(2, 1.9, 0.45, 1.1)];
        assert!(bracket_from_rows(&rows, 3, 1).is_err());
    }
}
