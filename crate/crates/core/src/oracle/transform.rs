use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::series::CoefficientSeries;

/// Majorana's change of variables
/// `t = 144^(-1/6) x^(1/2) φ^(1/6)`, `u = -(16/3)^(1/3) φ^(-4/3) φ'`.
pub fn majorana_transform<T: Real>(x: &T, phi: &T, phi_prime: &T) -> Result<(T, T)> {
    let ctx = phi.context();
    if phi.is_negative() || phi.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "phi must be positive, got {}",
            phi.to_sci_string(8)
        )));
    }
    if x.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "x must be non-negative, got {}",
            x.to_sci_string(8)
        )));
    }
    let r = |n: i64, d: i64| T::from_ratio(n, d, &ctx);
    let t = T::from_i64(144, &ctx).powr(&r(-1, 6)) * x.sqrt() * phi.powr(&r(1, 6));
    let u = -(T::cbrt_of_ratio(16, 3, &ctx) * phi.powr(&r(-4, 3)) * phi_prime.clone());
    Ok((t, u))
}

/// `R(t) = (1 - t² u_N) u_N' - 8 (t u_N² - 1)`, the cleared-denominator
/// residual of `u' = 8(t u² - 1)/(1 - t² u)` for the order-`N` truncation.
pub fn ode_residual<T: Real>(series: &CoefficientSeries<T>, t: &T, order: usize) -> Result<T> {
    let ctx = series.context();
    let u = series.evaluate_u(t, order)?;
    let du = series.evaluate_du(t, order)?;
    let one = T::one(ctx);
    let t2 = t.clone() * t.clone();
    Ok((one.clone() - t2 * u.clone()) * du
        - T::from_i64(8, ctx) * (t.clone() * u.clone() * u - one))
}
