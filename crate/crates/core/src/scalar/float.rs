use num_traits::Float;

use super::{Field, Real};

macro_rules! impl_float_scalar {
    ($($ty:ty => $digits:expr),*) => {
        $(
            impl Field for $ty {
                type Context = ();

                fn context(&self) {}

                fn from_i64(value: i64, _: &()) -> Self {
                    value as $ty
                }

                fn from_ratio(num: i64, den: i64, _: &()) -> Self {
                    (num as f64 / den as f64) as $ty
                }

                fn is_zero(&self) -> bool {
                    *self == 0.0
                }

                fn abs(&self) -> Self {
                    Float::abs(*self)
                }

                fn decimal_digits(_: &()) -> Option<u32> {
                    Some($digits)
                }

                fn pow10(exp: i64, _: &()) -> Self {
                    Float::powi(10.0 as $ty, exp as i32)
                }

                fn log10_abs(&self) -> f64 {
                    (*self as f64).abs().log10()
                }

                fn to_f64(&self) -> f64 {
                    *self as f64
                }

                fn to_sci_string(&self, digits: usize) -> String {
                    let s = format!("{:+.*e}", digits.saturating_sub(1), self);
                    match s.split_once('e') {
                        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
                        _ => s,
                    }
                }
            }

            impl Real for $ty {
                fn sqrt(&self) -> Self {
                    Float::sqrt(*self)
                }

                fn cbrt(&self) -> Self {
                    Float::cbrt(*self)
                }

                fn powr(&self, exponent: &Self) -> Self {
                    Float::powf(*self, *exponent)
                }
            }
        )*
    };
}

impl_float_scalar!(f32 => 7, f64 => 16);
