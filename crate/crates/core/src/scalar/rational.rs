use rug::{Integer, Rational};

use super::{BigReal, Field, PrecisionContext};

/// `log10 |n|` for integers of any size.
pub(crate) fn integer_log10(n: &Integer) -> f64 {
    let bits = n.significant_bits();
    if bits <= 1000 {
        return n.to_f64().abs().log10();
    }
    let shift = bits - 64;
    let top = Integer::from(n.abs_ref()) >> shift;
    top.to_f64().log10() + f64::from(shift) * std::f64::consts::LOG10_2
}

impl Field for Rational {
    type Context = ();

    fn context(&self) {}

    fn from_i64(value: i64, _: &()) -> Self {
        Rational::from(value)
    }

    fn from_ratio(num: i64, den: i64, _: &()) -> Self {
        Rational::from((num, den))
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }

    fn decimal_digits(_: &()) -> Option<u32> {
        None
    }

    fn pow10(exp: i64, _: &()) -> Self {
        let p = Integer::from(Integer::u_pow_u(10, exp.unsigned_abs() as u32));
        if exp >= 0 {
            Rational::from(p)
        } else {
            Rational::from((Integer::from(1), p))
        }
    }

    fn log10_abs(&self) -> f64 {
        integer_log10(self.numer()) - integer_log10(self.denom())
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn to_sci_string(&self, digits: usize) -> String {
        let ctx = PrecisionContext::new_unchecked(digits as u32 + 10);
        BigReal::from_rational(self, &ctx).to_sci_string(digits)
    }
}
