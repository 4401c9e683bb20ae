use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

/// Least-squares line through `(1/(n+1), a_{n+1}/a_n)`.
///
/// For an algebraic singularity `A(1 - x/x₀)^ν` the points lie exactly on
/// `1/x₀ - (ν+1)/(x₀(n+1))`, so `τ₀ = 1/intercept` and
/// `ν = -line_slope·τ₀ - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioFit<T> {
    pub n_lo: usize,
    pub n_hi: usize,
    pub intercept: T,
    pub line_slope: T,
    pub tau0: T,
    pub nu: T,
    /// Mean of the squared residuals; see [`RatioFit::residual_rms`].
    pub mean_square_residual: T,
}

impl<T: Real> RatioFit<T> {
    pub fn residual_rms(&self) -> T {
        self.mean_square_residual.sqrt()
    }
}

/// Unweighted OLS of `a_{n+1}/a_n` against `1/(n+1)` over `n_lo..=n_hi`.
pub fn ratio_line_fit<T: Field>(coeffs: &[T], n_lo: usize, n_hi: usize) -> Result<RatioFit<T>> {
    if n_hi < n_lo + 2 {
        return Err(Error::InvalidArgument(format!(
            "fit window [{n_lo}, {n_hi}] needs at least 3 indices"
        )));
    }
    if n_hi + 1 >= coeffs.len() {
        return Err(Error::IndexOutOfRange {
            index: n_hi + 1,
            n_max: coeffs.len().saturating_sub(1),
        });
    }
    let ctx = coeffs[0].context();
    let mut xs = Vec::with_capacity(n_hi - n_lo + 1);
    let mut ys = Vec::with_capacity(n_hi - n_lo + 1);
    for n in n_lo..=n_hi {
        if coeffs[n].is_zero() {
            return Err(Error::ZeroCoefficient { index: n });
        }
        xs.push(T::from_ratio(1, n as i64 + 1, &ctx));
        ys.push(coeffs[n + 1].clone() / coeffs[n].clone());
    }
    let count = T::from_i64(xs.len() as i64, &ctx);
    let sum = |v: &[T]| v.iter().fold(T::zero(&ctx), |acc, x| acc + x.clone());
    let x_mean = sum(&xs) / count.clone();
    let y_mean = sum(&ys) / count.clone();

    let mut sxx = T::zero(&ctx);
    let mut sxy = T::zero(&ctx);
    for (x, y) in xs.iter().zip(&ys) {
        let dx = x.clone() - x_mean.clone();
        sxy = sxy + dx.clone() * (y.clone() - y_mean.clone());
        sxx = sxx + dx.clone() * dx;
    }
    assert!(!sxx.is_zero(), "distinct indices give distinct abscissae");

    let line_slope = sxy / sxx;
    let intercept = y_mean - line_slope.clone() * x_mean;
    let mut rss = T::zero(&ctx);
    for (x, y) in xs.iter().zip(&ys) {
        let r = y.clone() - intercept.clone() - line_slope.clone() * x.clone();
        rss = rss + r.clone() * r;
    }
    let tau0 = T::one(&ctx) / intercept.clone();
    let nu = -(line_slope.clone() * tau0.clone()) - T::one(&ctx);
    Ok(RatioFit {
        n_lo,
        n_hi,
        intercept,
        line_slope,
        tau0,
        nu,
        mean_square_residual: rss / count,
    })
}
