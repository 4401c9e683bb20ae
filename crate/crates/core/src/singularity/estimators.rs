use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{relative_threshold, Field};

/// Singularity estimates from three consecutive coefficients at index `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityEstimate<T> {
    pub n: usize,
    /// `τ₀,ₙ` with the exponent left free.
    pub tau0_free: T,
    pub nu_n: T,
    /// `τ₀,ₙ` with the exponent fixed at 1/2.
    pub tau0_constrained: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub n: usize,
    pub tau0_free: String,
    pub nu_n: String,
    pub tau0_constrained: String,
}

impl<T: Field> SingularityEstimate<T> {
    pub fn row(&self, digits: usize) -> EstimateRow {
        EstimateRow {
            n: self.n,
            tau0_free: self.tau0_free.to_sci_string(digits),
            nu_n: self.nu_n.to_sci_string(digits),
            tau0_constrained: self.tau0_constrained.to_sci_string(digits),
        }
    }
}

fn get<T>(coeffs: &[T], index: usize) -> Result<&T> {
    coeffs.get(index).ok_or(Error::IndexOutOfRange {
        index,
        n_max: coeffs.len().saturating_sub(1),
    })
}

fn nonzero<T: Field>(coeffs: &[T], index: usize) -> Result<&T> {
    let a = get(coeffs, index)?;
    if a.is_zero() {
        return Err(Error::ZeroCoefficient { index });
    }
    Ok(a)
}

/// Location and exponent from `a_{n-1}, a_n, a_{n+1}`, assuming the local
/// form `A(1 - τ/τ₀)^ν`:
///
/// ```text
/// D   = (n+1) a_{n+1} a_{n-1} - n a_n²
/// τ₀,ₙ = a_n a_{n-1} / D
/// νₙ   = ((n²-1) a_{n+1} a_{n-1} - n² a_n²) / D
/// ```
///
/// `D` is a difference of two nearly equal products, so both are formed
/// in full before subtracting; the call fails when `D` has no significant
/// digits left.
pub fn hunter_guerrieri<T: Field>(coeffs: &[T], n: usize) -> Result<(T, T)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "hunter_guerrieri needs n >= 2, got {n}"
        )));
    }
    let next = nonzero(coeffs, n + 1)?;
    let cur = nonzero(coeffs, n)?;
    let prev = nonzero(coeffs, n - 1)?;
    let ctx = cur.context();
    let c = |v: usize| T::from_i64(v as i64, &ctx);

    let outer = next.clone() * prev.clone();
    let inner = cur.clone() * cur.clone();
    let n_inner = c(n) * inner.clone();
    let denominator = c(n + 1) * outer.clone() - n_inner.clone();

    let floor = relative_threshold::<T>(&ctx, 5) * n_inner.abs();
    if denominator.is_zero() || denominator.abs() < floor {
        return Err(Error::IllConditioned { n });
    }
    let tau0 = cur.clone() * prev.clone() / denominator.clone();
    let nu = (c(n * n - 1) * outer - c(n * n) * inner) / denominator;
    Ok((tau0, nu))
}

/// `τ₀,ₙ(ν = 1/2) = (n - 1/2)/(n + 1) · a_n / a_{n+1}`.
pub fn constrained_tau<T: Field>(coeffs: &[T], n: usize) -> Result<T> {
    if n < 1 {
        return Err(Error::InvalidArgument("constrained_tau needs n >= 1".into()));
    }
    let next = nonzero(coeffs, n + 1)?;
    let cur = get(coeffs, n)?;
    let ctx = cur.context();
    let factor = T::from_ratio(2 * n as i64 - 1, 2 * (n as i64 + 1), &ctx);
    Ok(factor * cur.clone() / next.clone())
}

/// One table row at index `n`.
pub fn estimate_at<T: Field>(coeffs: &[T], n: usize) -> Result<SingularityEstimate<T>> {
    let (tau0_free, nu_n) = hunter_guerrieri(coeffs, n)?;
    let tau0_constrained = constrained_tau(coeffs, n)?;
    Ok(SingularityEstimate {
        n,
        tau0_free,
        nu_n,
        tau0_constrained,
    })
}

/// Rows for every index in `ns`.
pub fn estimate_table<T: Field>(coeffs: &[T], ns: &[usize]) -> Result<Vec<SingularityEstimate<T>>> {
    ns.iter().map(|&n| estimate_at(coeffs, n)).collect()
}
