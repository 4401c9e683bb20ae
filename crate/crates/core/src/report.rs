//! Text, CSV and JSON renderings of results.
//!
//! CSV uses `.` as decimal separator, no grouping, and scientific notation
//! with explicit signs (`+1.2016860576926402943536180359e+0`).

use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::Field;
use crate::series::CoefficientSeries;
use crate::singularity::{EstimateRow, SingularityEstimate};

/// Significant digits of singularity tables.
pub const TABLE_DIGITS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn estimate_rows<T: Field>(rows: &[SingularityEstimate<T>], digits: usize) -> Vec<EstimateRow> {
    rows.iter().map(|r| r.row(digits)).collect()
}

pub fn table_csv(rows: &[EstimateRow]) -> String {
    let mut out = String::from("n,tau0_free,nu_n,tau0_constrained\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.n, r.tau0_free, r.nu_n, r.tau0_constrained);
    }
    out
}

pub fn table_text(rows: &[EstimateRow]) -> String {
    let mut out = format!(
        "{:>8}  {:<38}  {:<38}  {:<38}\n",
        "n", "tau0_n(nu_n)", "nu_n", "tau0_n(nu=1/2)"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8}  {:<38}  {:<38}  {:<38}",
            r.n, r.tau0_free, r.nu_n, r.tau0_constrained
        );
    }
    out
}

/// `(n, log10 a_n)` for every computed index.
pub fn figure_points<T: Field>(series: &CoefficientSeries<T>) -> Vec<(usize, f64)> {
    series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| (n, a.log10_abs()))
        .collect()
}

pub fn figure_csv(points: &[(usize, f64)]) -> String {
    let mut out = String::from("n,log10_a\n");
    for &(n, y) in points {
        let _ = writeln!(out, "{n},{}", Field::to_sci_string(&y, 15));
    }
    out
}

/// OLS slope of `log10 a_n` against `n` over `n_lo..=n_hi`.
pub fn figure_trend(points: &[(usize, f64)], n_lo: usize, n_hi: usize) -> Option<f64> {
    let window: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, _)| (n_lo..=n_hi).contains(n))
        .map(|&(n, y)| (n as f64, y))
        .collect();
    if window.len() < 2 {
        return None;
    }
    let len = window.len() as f64;
    let x_mean = window.iter().map(|p| p.0).sum::<f64>() / len;
    let y_mean = window.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = window.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)).sum();
    let sxx: f64 = window.iter().map(|p| (p.0 - x_mean).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = vec![EstimateRow {
            n: 7,
            tau0_free: "+1.2e+0".into(),
            nu_n: "+5.0e-1".into(),
            tau0_constrained: "+1.1e+0".into(),
        }];
        assert_eq!(
            table_csv(&rows),
            "n,tau0_free,nu_n,tau0_constrained\n7,+1.2e+0,+5.0e-1,+1.1e+0\n"
        );
    }

    #[test]
    fn trend_of_exact_line() {
        let pts: Vec<(usize, f64)> = (0..50).map(|n| (n, 3.0 - 0.25 * n as f64)).collect();
        assert!((figure_trend(&pts, 10, 40).unwrap() + 0.25).abs() < 1e-12);
        assert!(figure_trend(&pts, 60, 70).is_none());
    }
}
