use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use super::{Field, Real};
use crate::error::{Error, Result};

/// Smallest working precision a [`PrecisionContext`] accepts.
pub const MIN_DECIMAL_DIGITS: u32 = 30;

/// Extra binary digits on top of `ceil(P·log2 10)`. Guarantees that a
/// `P`-digit decimal string survives decimal → binary → decimal unchanged.
const GUARD_BITS: u32 = 8;

/// Working precision in significant decimal digits. Rounding is always
/// round-to-nearest, ties-to-even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::PrecisionTooLow {
                requested: decimal_digits,
                minimum: MIN_DECIMAL_DIGITS,
            });
        }
        Ok(Self { decimal_digits })
    }

    /// Internal contexts (guard computations, decimal rendering of exact
    /// values) that are allowed below the public minimum.
    pub(crate) fn new_unchecked(decimal_digits: u32) -> Self {
        Self {
            decimal_digits: decimal_digits.max(1),
        }
    }

    /// Working precision for `target_digits` certified slope digits at
    /// series order `order`: `D + ceil(log10 N) + 20`.
    pub fn for_slope_target(target_digits: u32, order: usize) -> Result<Self> {
        let order_digits = (order.max(1) as f64).log10().ceil() as u32;
        Self::new((target_digits + order_digits + 20).max(MIN_DECIMAL_DIGITS))
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Binary significand width used for arithmetic under this context.
    pub fn bits(&self) -> u32 {
        (f64::from(self.decimal_digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn with_extra_digits(&self, extra: u32) -> Self {
        Self {
            decimal_digits: self.decimal_digits + extra,
        }
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.decimal_digits)
    }
}

/// Arbitrary-precision real backed by an MPFR float.
///
/// The binary exponent range covers roughly ±3·10⁸ decades, far beyond the
/// 10⁻³²⁰⁰⁰ magnitudes reached by the coefficients at n = 4·10⁵.
#[derive(Clone)]
pub struct BigReal {
    value: Float,
    digits: u32,
}

impl BigReal {
    /// Rounds `value` to the context precision.
    pub fn from_float(value: &Float, ctx: &PrecisionContext) -> Self {
        Self {
            value: Float::with_val(ctx.bits(), value),
            digits: ctx.decimal_digits(),
        }
    }

    pub fn from_rational(value: &Rational, ctx: &PrecisionContext) -> Self {
        Self {
            value: Float::with_val(ctx.bits(), value),
            digits: ctx.decimal_digits(),
        }
    }

    /// Parses decimal text such as `+4.5599625e-1` or `-1.588`.
    pub fn parse(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse {
            what: format!("real number `{text}`"),
            reason: e.to_string(),
        })?;
        Ok(Self {
            value: Float::with_val(ctx.bits(), parsed),
            digits: ctx.decimal_digits(),
        })
    }

    pub fn precision(&self) -> PrecisionContext {
        PrecisionContext::new_unchecked(self.digits)
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    /// Rounds to a different context.
    pub fn round_to(&self, ctx: &PrecisionContext) -> Self {
        Self::from_float(&self.value, ctx)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    /// Decimal rendering as `(negative, significand digits, exponent)` with
    /// value `±d.ddd… × 10^exponent`. Zero yields an all-zero significand
    /// and exponent 0.
    pub fn decimal_parts(&self, digits: usize) -> (bool, String, i64) {
        let digits = digits.max(1);
        let (neg, mantissa, exp) =
            self.value
                .to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        match exp {
            Some(e) if self.value.is_normal() => (neg, mantissa, i64::from(e) - 1),
            _ => (false, "0".repeat(digits), 0),
        }
    }

    fn with_digits(value: Float, digits: u32) -> Self {
        Self { value, digits }
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_sci_string(self.digits as usize))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(self.digits as usize))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let digits = self.digits.max(rhs.digits);
                let bits = PrecisionContext::new_unchecked(digits).bits();
                BigReal::with_digits(Float::with_val(bits, &self.value $op &rhs.value), digits)
            }
        }

        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }

        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);
impl_binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::with_digits(-self.value, self.digits)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::with_digits(Float::with_val(self.value.prec(), -&self.value), self.digits)
    }
}

impl Field for BigReal {
    type Context = PrecisionContext;

    fn context(&self) -> PrecisionContext {
        self.precision()
    }

    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self {
        Self::with_digits(Float::with_val(ctx.bits(), value), ctx.decimal_digits())
    }

    fn from_ratio(num: i64, den: i64, ctx: &PrecisionContext) -> Self {
        Self::from_rational(&Rational::from((num, den)), ctx)
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    fn abs(&self) -> Self {
        Self::with_digits(Float::with_val(self.value.prec(), self.value.abs_ref()), self.digits)
    }

    fn decimal_digits(ctx: &PrecisionContext) -> Option<u32> {
        Some(ctx.decimal_digits())
    }

    fn pow10(exp: i64, ctx: &PrecisionContext) -> Self {
        let p = Integer::from(Integer::u_pow_u(10, exp.unsigned_abs() as u32));
        let r = if exp >= 0 {
            Rational::from(p)
        } else {
            Rational::from((Integer::from(1), p))
        };
        Self::from_rational(&r, ctx)
    }

    fn log10_abs(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mantissa, exp) = self.value.to_f64_exp();
        mantissa.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
    }

    fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    fn to_sci_string(&self, digits: usize) -> String {
        if !self.value.is_finite() {
            return self.value.to_string();
        }
        let (neg, mantissa, exp) = self.decimal_parts(digits);
        let sign = if neg { '-' } else { '+' };
        let (head, tail) = mantissa.split_at(1);
        let exp_sign = if exp < 0 { '-' } else { '+' };
        if tail.is_empty() {
            format!("{sign}{head}e{exp_sign}{}", exp.unsigned_abs())
        } else {
            format!("{sign}{head}.{tail}e{exp_sign}{}", exp.unsigned_abs())
        }
    }

    fn sum_of_products<'a, I>(ctx: &PrecisionContext, pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        let bits = ctx.bits();
        let mut acc = Float::new(bits);
        let mut product = Float::new(bits);
        for (x, y) in pairs {
            product.assign(&x.value * &y.value);
            acc += &product;
        }
        Self::with_digits(acc, ctx.decimal_digits())
    }

    /// Rounds to exactly `P` significant decimal digits, so a stored value
    /// is identical to what a `P`-digit cache line parses back to.
    fn quantize(self) -> Self {
        if !self.value.is_normal() {
            return self;
        }
        let text = self.to_sci_string(self.digits as usize);
        let ctx = self.precision();
        let parsed = Float::parse(&text).expect("sci rendering always parses");
        Self::with_digits(Float::with_val(ctx.bits(), parsed), self.digits)
    }
}

impl Real for BigReal {
    fn sqrt(&self) -> Self {
        Self::with_digits(Float::with_val(self.value.prec(), self.value.sqrt_ref()), self.digits)
    }

    fn cbrt(&self) -> Self {
        Self::with_digits(Float::with_val(self.value.prec(), self.value.cbrt_ref()), self.digits)
    }

    fn powr(&self, exponent: &Self) -> Self {
        let digits = self.digits.max(exponent.digits);
        let bits = PrecisionContext::new_unchecked(digits).bits();
        Self::with_digits(Float::with_val(bits, (&self.value).pow(&exponent.value)), digits)
    }

    /// Evaluated with ten guard digits, then rounded once to the context.
    fn cbrt_of_ratio(num: i64, den: i64, ctx: &PrecisionContext) -> Self {
        let guarded = ctx.with_extra_digits(10);
        let x = Float::with_val(guarded.bits(), Rational::from((num, den)));
        Self::from_float(&x.cbrt(), ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn rejects_low_precision() {
        assert!(matches!(
            PrecisionContext::new(29),
            Err(Error::PrecisionTooLow { requested: 29, .. })
        ));
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn slope_target_policy() {
        // 400 digits at N = 5000: 400 + 4 + 20
        assert_eq!(PrecisionContext::for_slope_target(400, 5000).unwrap().decimal_digits(), 424);
        assert_eq!(PrecisionContext::for_slope_target(4, 60).unwrap().decimal_digits(), 30);
    }

    #[test]
    fn sci_string_layout() {
        let c = ctx(30);
        let one = BigReal::one(&c);
        assert_eq!(one.to_sci_string(5), "+1.0000e+0");
        let x = BigReal::from_ratio(-3, 16, &c);
        assert_eq!(x.to_sci_string(4), "-1.875e-1");
        assert_eq!(BigReal::zero(&c).to_sci_string(3), "+0.00e+0");
        assert_eq!(BigReal::pow10(-32000, &c).to_sci_string(2), "+1.0e-32000");
    }

    #[test]
    fn extreme_exponents_do_not_underflow() {
        let c = ctx(40);
        let tiny = BigReal::pow10(-1_000_000, &c);
        assert!(!tiny.is_zero());
        assert!((tiny.log10_abs() + 1_000_000.0).abs() < 1e-6);
        let product = tiny.clone() * tiny;
        assert!((product.log10_abs() + 2_000_000.0).abs() < 1e-6);
    }

    #[test]
    fn quantize_round_trips_through_text() {
        let c = ctx(45);
        let x = BigReal::from_ratio(1, 7, &c).sqrt().quantize();
        let back = BigReal::parse(&x.to_sci_string(45), &c).unwrap();
        assert_eq!(x.as_float(), back.as_float());
        assert_eq!(x.clone().quantize().as_float(), x.as_float());
    }

    #[test]
    fn cube_root_constant() {
        let c = ctx(50);
        let k = BigReal::cbrt_of_ratio(3, 16, &c);
        let cubed = k.clone() * k.clone() * k;
        let target = BigReal::from_ratio(3, 16, &c);
        assert!(super::super::agreement_digits(&cubed, &target, 100.0) > 49.0);
    }

    #[test]
    fn sum_of_products_matches_fold() {
        let c = ctx(60);
        let xs: Vec<BigReal> = (1..20).map(|i| BigReal::from_ratio(1, i, &c)).collect();
        let ys: Vec<BigReal> = (1..20).map(|i| BigReal::from_ratio(i, 3, &c)).collect();
        let fast = BigReal::sum_of_products(&c, xs.iter().zip(ys.iter()));
        let slow = xs
            .iter()
            .zip(&ys)
            .fold(BigReal::zero(&c), |acc, (x, y)| acc + x * y);
        assert_eq!(fast, slow);
    }
}
