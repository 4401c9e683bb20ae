use crate::error::{Error, Result};
use crate::scalar::Field;

/// Taylor coefficients of `A(1 - x/x₀)^ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries<T> {
    pub amplitude: T,
    pub x0: T,
    pub nu: T,
    pub coeffs: Vec<T>,
    /// `ν` is a non-negative integer and the series is a polynomial; the
    /// estimators reject its zero coefficients.
    pub terminates: bool,
}

impl<T: Field> SyntheticSeries<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }
}

/// `f_0 = A`, `f_{n+1} = f_n (n - ν) / (x₀ (n+1))`.
pub fn synthetic_coefficients<T: Field>(amplitude: T, x0: T, nu: T, n_max: usize) -> Result<SyntheticSeries<T>> {
    if x0.is_zero() {
        return Err(Error::InvalidArgument("synthetic series needs x0 != 0".into()));
    }
    let ctx = amplitude.context();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(amplitude.clone());
    let mut terminates = false;
    for n in 0..n_max {
        let k = T::from_i64(n as i64, &ctx);
        let factor = k.clone() - nu.clone();
        terminates |= factor.is_zero();
        let next = coeffs[n].clone() * factor / (x0.clone() * T::from_i64(n as i64 + 1, &ctx));
        coeffs.push(next);
    }
    Ok(SyntheticSeries {
        amplitude,
        x0,
        nu,
        coeffs,
        terminates,
    })
}

/// `1/x₀ - (ν+1)/(x₀(n+1))`, the exact ratio `f_{n+1}/f_n` of the family.
pub fn synthetic_ratio<T: Field>(x0: &T, nu: &T, n: usize) -> T {
    let ctx = x0.context();
    let one = T::one(&ctx);
    one.clone() / x0.clone()
        - (nu.clone() + one) / (x0.clone() * T::from_i64(n as i64 + 1, &ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn linear_function_terminates() {
        let s = synthetic_coefficients(r(1, 1), r(1, 1), r(1, 1), 5).unwrap();
        assert_eq!(s.coeffs, vec![r(1, 1), r(-1, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)]);
        assert!(s.terminates);
    }

    #[test]
    fn square_root_first_terms() {
        let s = synthetic_coefficients(r(1, 1), r(2, 1), r(1, 2), 2).unwrap();
        assert_eq!(s.coeffs[1], r(-1, 4));
        assert_eq!(s.coeffs[2], r(-1, 32));
        assert!(!s.terminates);
    }

    #[test]
    fn ratios_lie_on_the_line() {
        let (x0, nu) = (r(7, 10), r(-3, 2));
        let s = synthetic_coefficients(r(3, 1), x0.clone(), nu.clone(), 50).unwrap();
        for n in 0..50 {
            let ratio = s.coeffs[n + 1].clone() / s.coeffs[n].clone();
            assert_eq!(ratio, synthetic_ratio(&x0, &nu, n));
        }
    }

    #[test]
    fn zero_location_is_rejected() {
        assert!(synthetic_coefficients(1.0_f64, 0.0, 0.5, 3).is_err());
    }
}
