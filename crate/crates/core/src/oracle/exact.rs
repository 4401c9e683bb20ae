use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::scalar::{BigReal, Field, PrecisionContext};
use crate::series::Branch;

/// Default cap on [`exact_recurrence`]; rational sizes grow quickly past it.
pub const EXACT_CAP: usize = 300;

const RADICAND: u32 = 73;

/// `p + q·√73` with exact rational `p`, `q`.
///
/// Every Majorana coefficient lives in ℚ(√73) because the recurrence is
/// rational in `a_1 = 9 ∓ √73`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactCoefficient {
    p: Rational,
    q: Rational,
}

impl ExactCoefficient {
    pub fn new(p: Rational, q: Rational) -> Self {
        Self { p, q }
    }

    pub fn rational(p: Rational) -> Self {
        Self { p, q: Rational::new() }
    }

    /// `a_1` for the given branch: `(9, ∓1)`.
    pub fn a1(branch: Branch) -> Self {
        let q = match branch {
            Branch::Minus => -1,
            Branch::Plus => 1,
        };
        Self::new(Rational::from(9), Rational::from(q))
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `p² - 73 q²`, the field norm.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.p * &self.p) - Rational::from(&self.q * &self.q) * RADICAND
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.p.clone(), Rational::from(-&self.q))
    }

    fn scale(&self, k: i64) -> Self {
        Self::new(Rational::from(&self.p * k), Rational::from(&self.q * k))
    }

    /// Sign of `p + q√73`, exactly.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp0();
        let sq = self.q.cmp0();
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // opposite signs: compare p² with 73 q²
            (a, _) => {
                let p2 = Rational::from(&self.p * &self.p);
                let q2 = Rational::from(&self.q * &self.q) * RADICAND;
                match p2.cmp(&q2) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => unreachable!("√73 is irrational"),
                }
            }
        }
    }

    /// Decimal value rounded to `ctx`.
    ///
    /// When `p` and `q√73` nearly cancel, the value is formed as
    /// `(p² - 73q²) / (p - q√73)` whose denominator does not cancel.
    pub fn to_bigreal(&self, ctx: &PrecisionContext) -> BigReal {
        let guarded = ctx.with_extra_digits(20);
        let bits = guarded.bits();
        let root = Float::with_val(bits, RADICAND).sqrt();
        let same_sign = self.p.cmp0() == Ordering::Equal
            || self.q.cmp0() == Ordering::Equal
            || self.p.cmp0() == self.q.cmp0();
        let value = if same_sign {
            Float::with_val(bits, &self.p) + Float::with_val(bits, &self.q) * &root
        } else {
            let denominator = Float::with_val(bits, &self.p) - Float::with_val(bits, &self.q) * &root;
            Float::with_val(bits, &self.norm()) / denominator
        };
        BigReal::from_float(&value, ctx)
    }

    /// Bits in the largest numerator or denominator, for monitoring growth.
    pub fn size_bits(&self) -> u32 {
        let bits = |r: &Rational| r.numer().significant_bits().max(r.denom().significant_bits());
        bits(&self.p).max(bits(&self.q))
    }
}

impl fmt::Debug for ExactCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})√73", self.p, self.q)
    }
}

impl PartialOrd for ExactCoefficient {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

impl Add for ExactCoefficient {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for ExactCoefficient {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Mul for ExactCoefficient {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let pp = Rational::from(&self.p * &rhs.p);
        let qq = Rational::from(&self.q * &rhs.q) * RADICAND;
        let pq = Rational::from(&self.p * &rhs.q);
        let qp = Rational::from(&self.q * &rhs.p);
        Self::new(pp + qq, pq + qp)
    }
}

impl Div for ExactCoefficient {
    type Output = Self;
    /// Multiplies by the conjugate over the norm. Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.norm();
        assert!(norm.cmp0() != Ordering::Equal, "division by zero in Q(sqrt 73)");
        let num = self * rhs.conjugate();
        Self::new(num.p / &norm, num.q / &norm)
    }
}

impl Neg for ExactCoefficient {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.p, -self.q)
    }
}

impl Field for ExactCoefficient {
    type Context = ();

    fn context(&self) {}

    fn from_i64(value: i64, _: &()) -> Self {
        Self::rational(Rational::from(value))
    }

    fn from_ratio(num: i64, den: i64, _: &()) -> Self {
        Self::rational(Rational::from((num, den)))
    }

    fn is_zero(&self) -> bool {
        self.p.cmp0() == Ordering::Equal && self.q.cmp0() == Ordering::Equal
    }

    fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    fn decimal_digits(_: &()) -> Option<u32> {
        None
    }

    fn pow10(exp: i64, _: &()) -> Self {
        Self::rational(<Rational as Field>::pow10(exp, &()))
    }

    fn log10_abs(&self) -> f64 {
        self.to_bigreal(&PrecisionContext::new_unchecked(30)).log10_abs()
    }

    fn to_f64(&self) -> f64 {
        self.to_bigreal(&PrecisionContext::new_unchecked(30)).to_f64()
    }

    fn to_sci_string(&self, digits: usize) -> String {
        self.to_bigreal(&PrecisionContext::new_unchecked(digits as u32 + 10))
            .to_sci_string(digits)
    }
}

/// `a_0 … a_{m_max}` of the minus branch in exact ℚ(√73) arithmetic, with
/// the recurrence evaluated term by term as written (the bracket is
/// recomputed inside the inner sum, nothing is shared with
/// [`CoefficientSeries`](crate::CoefficientSeries)).
pub fn exact_recurrence(m_max: usize) -> Result<Vec<ExactCoefficient>> {
    exact_recurrence_with(Branch::Minus, m_max, EXACT_CAP)
}

pub fn exact_recurrence_with(branch: Branch, m_max: usize, cap: usize) -> Result<Vec<ExactCoefficient>> {
    if m_max > cap {
        return Err(Error::CapExceeded {
            requested: m_max,
            cap,
        });
    }
    let one = ExactCoefficient::from_i64(1, &());
    let a1 = ExactCoefficient::a1(branch);
    let mut a = vec![one.clone(), a1.clone()];
    for m in 2..=m_max {
        let mi = m as i64;
        let mut sum = ExactCoefficient::from_i64(0, &());
        for n in 1..=m.saturating_sub(2) {
            let ni = n as i64;
            let bracket = a[n + 1].scale(ni + 1) - a[n].scale(2 * (ni + 4)) + a[n - 1].scale(ni + 7);
            sum = sum + a[m - n].clone() * bracket;
        }
        let lead = (ExactCoefficient::from_i64(mi + 7, &()) - a1.scale(2 * (mi + 3))) * a[m - 1].clone();
        let tail = a1.scale(mi + 6) * a[m - 2].clone();
        let denominator = ExactCoefficient::from_i64(2 * (mi + 8), &()) - a1.scale(mi + 1);
        a.push((sum + lead + tail) / denominator);
    }
    a.truncate(m_max + 1);
    Ok(a)
}
