//! Majorana series coefficients.
//!
//! `u(t) = Σ a_j τ^j` with `τ = 1 - t`, `a_0 = 1`, `a_1` a root of
//! `a² - 18a + 8 = 0`, and for `m ≥ 2`
//!
//! ```text
//! a_m = [ Σ_{n=1}^{m-2} a_{m-n} b_n + (m+7 - 2(m+3)a_1) a_{m-1} + (m+6) a_1 a_{m-2} ]
//!       / (2(m+8) - (m+1) a_1)
//! b_n = (n+1) a_{n+1} - 2(n+4) a_n + (n+7) a_{n-1}
//! ```
//!
//! The inner sum is empty for `m = 2`, where the last term uses `a_0 = 1`.
//! `b_n` depends only on `n`, so it is evaluated once and reused for every
//! later `m`; the inner sum is then a plain convolution.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{relative_threshold, Field, Real};

pub mod cache;

/// Root of `a_1² - 18 a_1 + 8 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `a_1 = 9 - √73`: all coefficients positive, convergent series.
    Minus,
    /// `a_1 = 9 + √73`: diagnostic only.
    Plus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Branch::Minus),
            "plus" => Ok(Branch::Plus),
            other => Err(Error::InvalidArgument(format!("unknown branch `{other}`"))),
        }
    }
}

/// The requested root of `a_1² - 18 a_1 + 8 = 0`.
///
/// The minus root is formed as `8 / (9 + √73)` so that no digits cancel.
pub fn select_a1<T: Real>(branch: Branch, ctx: &T::Context) -> T {
    let nine = T::from_i64(9, ctx);
    let root = T::from_i64(73, ctx).sqrt();
    let a1 = match branch {
        Branch::Minus => T::from_i64(8, ctx) / (nine + root),
        Branch::Plus => nine + root,
    };
    a1.quantize()
}

/// How the convolution in the recurrence is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Ascending `n`, one accumulator. Bitwise reproducible.
    #[default]
    Sequential,
    /// Fixed-size chunks summed on the rayon pool, then combined in order.
    /// Reproducible for a fixed chunk length, but not bitwise identical to
    /// [`Summation::Sequential`].
    Parallel { chunk: usize },
}

/// Majorana coefficients `a_0 … a_{n_max}` for one branch and precision.
#[derive(Debug, Clone)]
pub struct CoefficientSeries<T: Field> {
    branch: Branch,
    ctx: T::Context,
    a1: T,
    coeffs: Vec<T>,
    /// `brackets[n - 1] = b_n`.
    brackets: Vec<T>,
}

impl<T: Real> CoefficientSeries<T> {
    /// A series holding `a_0` and `a_1`.
    pub fn new(branch: Branch, ctx: T::Context) -> Self {
        let a1 = select_a1(branch, &ctx);
        Self::with_a1(branch, a1, ctx)
    }
}

impl<T: Field> CoefficientSeries<T> {
    /// A series started from an explicitly supplied `a_1`, e.g. an exact
    /// field element.
    pub fn with_a1(branch: Branch, a1: T, ctx: T::Context) -> Self {
        let coeffs = vec![T::one(&ctx), a1.clone()];
        Self {
            branch,
            ctx,
            a1,
            coeffs,
            brackets: Vec::new(),
        }
    }

    /// Rebuilds a series from stored coefficients (`coeffs[0]` must be 1).
    pub fn from_coefficients(branch: Branch, ctx: T::Context, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument(
                "a series needs at least a_0 and a_1".into(),
            ));
        }
        if coeffs[0] != T::one(&ctx) {
            return Err(Error::InvalidArgument(format!(
                "a_0 must be exactly 1, found {}",
                coeffs[0].to_sci_string(20)
            )));
        }
        let mut series = Self {
            branch,
            a1: coeffs[1].clone(),
            ctx,
            coeffs,
            brackets: Vec::new(),
        };
        // b_n for n ≤ n_max - 2, the state `extend_to(n_max)` would leave.
        for n in 1..series.coeffs.len().saturating_sub(2) {
            let b = series.bracket(n);
            series.brackets.push(b);
        }
        Ok(series)
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn context(&self) -> &T::Context {
        &self.ctx
    }

    pub fn a1(&self) -> &T {
        &self.a1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&T> {
        self.coeffs.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            n_max: self.n_max(),
        })
    }

    /// Extends sequentially up to `m_target`. Existing entries never change.
    pub fn extend_to(&mut self, m_target: usize) -> Result<()> {
        self.extend_with(m_target, usize::MAX, |_| Ok(()))
    }

    /// Sequential extension calling `checkpoint` after every `every`-th
    /// coefficient and once at the end.
    pub fn extend_with<F>(&mut self, m_target: usize, every: usize, checkpoint: F) -> Result<()>
    where
        F: FnMut(&Self) -> Result<()>,
    {
        self.extend_impl(m_target, every, checkpoint, |coeffs, brackets, m, ctx| {
            T::sum_of_products(ctx, convolution_pairs(coeffs, brackets, m))
        })
    }

    fn extend_impl<F, S>(
        &mut self,
        m_target: usize,
        every: usize,
        mut checkpoint: F,
        inner_sum: S,
    ) -> Result<()>
    where
        F: FnMut(&Self) -> Result<()>,
        S: Fn(&[T], &[T], usize, &T::Context) -> T,
    {
        let start = self.n_max();
        if m_target <= start {
            return Ok(());
        }
        let every = every.max(1);
        for m in start + 1..=m_target {
            if m >= 3 {
                let b = self.bracket(m - 2);
                self.brackets.push(b);
            }
            let inner = inner_sum(&self.coeffs, &self.brackets, m, &self.ctx);
            let a_m = self.finish_term(m, inner)?;
            self.coeffs.push(a_m);
            if m % every == 0 && m != m_target {
                checkpoint(self)?;
            }
        }
        checkpoint(self)
    }

    /// `b_n`; needs `a_{n+1}`.
    fn bracket(&self, n: usize) -> T {
        let c = |v: usize| T::from_i64(v as i64, &self.ctx);
        let a = &self.coeffs;
        c(n + 1) * a[n + 1].clone() - c(2 * (n + 4)) * a[n].clone()
            + c(n + 7) * a[n - 1].clone()
    }

    fn finish_term(&self, m: usize, inner: T) -> Result<T> {
        let ctx = &self.ctx;
        let c = |v: usize| T::from_i64(v as i64, ctx);
        let a = &self.coeffs;
        let a1 = &self.a1;

        let lead = (c(m + 7) - c(2 * (m + 3)) * a1.clone()) * a[m - 1].clone();
        let tail = c(m + 6) * a1.clone() * a[m - 2].clone();
        let denominator = c(2 * (m + 8)) - c(m + 1) * a1.clone();

        let floor = relative_threshold::<T>(ctx, 5) * c(m + 8);
        if denominator.is_zero() || denominator.abs() < floor {
            return Err(Error::VanishingDenominator {
                m,
                magnitude: denominator.abs().to_sci_string(6),
            });
        }
        let a_m = ((inner + lead + tail) / denominator).quantize();

        if self.branch == Branch::Minus {
            if a_m.is_negative() || a_m.is_zero() {
                return Err(Error::NonPositiveCoefficient {
                    m,
                    value: a_m.to_sci_string(12),
                });
            }
            if a_m >= a[m - 1] {
                return Err(Error::RatioOutOfRange {
                    n: m - 1,
                    value: (a_m / a[m - 1].clone()).to_sci_string(12),
                });
            }
        }
        Ok(a_m)
    }

    /// `a_{n+1} / a_n`.
    pub fn coefficient_ratio(&self, n: usize) -> Result<T> {
        let next = self.coeff(n + 1)?;
        let current = self.coeff(n)?;
        if current.is_zero() {
            return Err(Error::ZeroCoefficient { index: n });
        }
        Ok(next.clone() / current.clone())
    }

    /// `u_N(t) = Σ_{j≤N} a_j (1-t)^j` by Horner's rule in `τ = 1 - t`.
    ///
    /// Only meaningful for `|1 - t|` inside the radius of convergence
    /// (≈ 1.2017); outside it the truncations diverge.
    pub fn evaluate_u(&self, t: &T, order: usize) -> Result<T> {
        self.coeff(order)?;
        let tau = T::one(&self.ctx) - t.clone();
        Ok(self.coeffs[..=order]
            .iter()
            .rev()
            .fold(T::zero(&self.ctx), |acc, a| acc * tau.clone() + a.clone()))
    }

    /// `du_N/dt = -Σ_{j=1}^{N} j a_j τ^{j-1}`, term-wise derivative of the
    /// truncation.
    pub fn evaluate_du(&self, t: &T, order: usize) -> Result<T> {
        self.coeff(order)?;
        let tau = T::one(&self.ctx) - t.clone();
        let d_tau = (1..=order).rev().fold(T::zero(&self.ctx), |acc, j| {
            acc * tau.clone() + T::from_i64(j as i64, &self.ctx) * self.coeffs[j].clone()
        });
        Ok(-d_tau)
    }
}

impl<T: Field + Send + Sync> CoefficientSeries<T>
where
    T::Context: Sync,
{
    /// Extension with the convolution split into `chunk`-sized pieces summed
    /// on the rayon pool.
    pub fn extend_parallel_with<F>(
        &mut self,
        m_target: usize,
        chunk: usize,
        every: usize,
        checkpoint: F,
    ) -> Result<()>
    where
        F: FnMut(&Self) -> Result<()>,
    {
        let chunk = chunk.max(1);
        self.extend_impl(m_target, every, checkpoint, |coeffs, brackets, m, ctx| {
            if m < 3 {
                return T::zero(ctx);
            }
            let indices: Vec<usize> = (1..=m - 2).collect();
            let partials: Vec<T> = indices
                .par_chunks(chunk)
                .map(|ns| {
                    T::sum_of_products(ctx, ns.iter().map(|&n| (&coeffs[m - n], &brackets[n - 1])))
                })
                .collect();
            partials
                .into_iter()
                .fold(T::zero(ctx), |acc, part| acc + part)
        })
    }

    /// Dispatches on `mode`.
    pub fn extend_in_mode<F>(
        &mut self,
        m_target: usize,
        mode: Summation,
        every: usize,
        checkpoint: F,
    ) -> Result<()>
    where
        F: FnMut(&Self) -> Result<()>,
    {
        match mode {
            Summation::Sequential => self.extend_with(m_target, every, checkpoint),
            Summation::Parallel { chunk } => {
                self.extend_parallel_with(m_target, chunk, every, checkpoint)
            }
        }
    }
}

/// `(a_{m-n}, b_n)` for `n = 1 ..= m-2`, ascending.
fn convolution_pairs<'a, T>(
    coeffs: &'a [T],
    brackets: &'a [T],
    m: usize,
) -> impl Iterator<Item = (&'a T, &'a T)> + 'a {
    (1..m.saturating_sub(1)).map(move |n| (&coeffs[m - n], &brackets[n - 1]))
}
