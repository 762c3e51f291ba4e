//! Natural cubic splines and the per-direction spline predictor.

use crate::error::{Error, Result};
use crate::image::{Coord, Direction, ImageGrid, ScratchMask};
use crate::locality::{select_stencil, Stencil};
use crate::scalar::Scalar;

/// Natural cubic spline (zero second derivative at both end knots).
#[derive(Debug, Clone, PartialEq)]
pub struct Spline<T> {
    knots: Vec<T>,
    values: Vec<T>,
    second_derivatives: Vec<T>,
}

impl<T: Scalar> Spline<T> {
    /// Fits through `(xs[i], ys[i])`. Two points give the linear interpolant.
    pub fn fit(xs: &[T], ys: &[T]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "{} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "a spline needs at least 2 points".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            second_derivatives: natural_second_derivatives(xs, ys),
            knots: xs.to_vec(),
            values: ys.to_vec(),
        })
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn second_derivatives(&self) -> &[T] {
        &self.second_derivatives
    }

    /// Piecewise-cubic value; outside the knot span the end segment's cubic is extended.
    pub fn eval(&self, x: T) -> T {
        let n = self.knots.len();
        let i = self
            .knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(n - 2);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let six = T::of(6.0);
        // Anchored form: constant data reproduces bit-exactly.
        self.values[i]
            + b * (self.values[i + 1] - self.values[i])
            + ((a * a * a - a) * self.second_derivatives[i]
                + (b * b * b - b) * self.second_derivatives[i + 1])
                * h
                * h
                / six
    }
}

/// Thomas solve of the natural-spline tridiagonal system.
fn natural_second_derivatives<T: Scalar>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let mut m = vec![T::zero(); n];
    if n < 3 {
        return m;
    }
    let two = T::of(2.0);
    let six = T::of(6.0);
    // Forward sweep over interior rows 1..n-1, storing modified super-diagonal and rhs.
    let mut c_prime = vec![T::zero(); n];
    let mut d_prime = vec![T::zero(); n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let rhs = six * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        let (sub, diag, sup) = (h0, two * (h0 + h1), h1);
        let (prev_c, prev_d) = if i == 1 {
            (T::zero(), T::zero())
        } else {
            (c_prime[i - 1], d_prime[i - 1])
        };
        let denom = diag - sub * prev_c;
        c_prime[i] = sup / denom;
        d_prime[i] = (rhs - sub * prev_d) / denom;
    }
    m[n - 2] = d_prime[n - 2];
    for i in (1..n - 2).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

/// Spline value at offset 0 for a stencil's samples, clamped to `[0, 1]`.
/// `None` when fewer than two samples exist.
pub fn predict_from_samples<T: Scalar>(offsets: &[isize], values: &[T]) -> Option<T> {
    if offsets.len() < 2 {
        return None;
    }
    let xs: Vec<T> = offsets.iter().map(|&o| T::of(o as f64)).collect();
    let spline = Spline::fit(&xs, values).ok()?;
    Some(spline.eval(T::zero()).clamp_unit())
}

/// Stencil-driven prediction for one channel of `image`.
pub fn predict_stencil<T: Scalar>(
    image: &ImageGrid<T>,
    p: Coord,
    stencil: &Stencil,
    channel: usize,
) -> Option<T> {
    if stencil.offsets.len() < 2 {
        return None;
    }
    let values: Vec<T> = stencil
        .coords(p, image.width(), image.height())
        .map(|(r, c)| image.get(r, c, channel))
        .collect();
    predict_from_samples(&stencil.offsets, &values)
}

/// Spline prediction for the lost pixel `p` along `dir`, using channel 0.
pub fn predict_direction<T: Scalar>(
    image: &ImageGrid<T>,
    mask: &ScratchMask,
    p: Coord,
    dir: Direction,
    k_total: usize,
) -> Option<T> {
    let stencil = select_stencil(mask, p, dir, k_total);
    predict_stencil(image, p, &stencil, 0)
}
