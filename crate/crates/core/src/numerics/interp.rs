//! Shape-preserving (monotone) piecewise cubic Hermite interpolation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fritsch–Carlson monotone cubic through `(xs[i], ys[i])`.
///
/// Monotone data produce a monotone interpolant, which is what makes
/// [`MonotoneCubic::inverse`] well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic<F> {
    xs: Vec<F>,
    ys: Vec<F>,
    slopes: Vec<F>,
}

impl<F: Scalar> MonotoneCubic<F> {
    pub fn new(xs: Vec<F>, ys: Vec<F>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::domain(
                "MonotoneCubic",
                "need at least two points and matching lengths",
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("MonotoneCubic", "abscissae must be strictly increasing"));
        }
        let n = xs.len();
        let secants: Vec<F> = (0..n - 1)
            .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
            .collect();
        let mut slopes = vec![F::zero(); n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            slopes[i] = if d0 * d1 <= F::zero() {
                F::zero()
            } else {
                // weighted harmonic mean (Fritsch–Butland)
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = F::lit(2.0) * h1 + h0;
                let w1 = h1 + F::lit(2.0) * h0;
                (w0 + w1) / (w0 / d0 + w1 / d1)
            };
        }
        for i in 0..n - 1 {
            let d = secants[i];
            if d == F::zero() {
                slopes[i] = F::zero();
                slopes[i + 1] = F::zero();
                continue;
            }
            let a = slopes[i] / d;
            let b = slopes[i + 1] / d;
            let r = a * a + b * b;
            if r > F::lit(9.0) {
                let t = F::lit(3.0) / r.sqrt();
                slopes[i] = t * a * d;
                slopes[i + 1] = t * b * d;
            }
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn xs(&self) -> &[F] {
        &self.xs
    }

    pub fn ys(&self) -> &[F] {
        &self.ys
    }

    fn segment(&self, x: F) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).expect("finite abscissa")) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Evaluates the interpolant; outside the data range the end cubic is extended.
    pub fn eval(&self, x: F) -> F {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = F::lit(2.0);
        let three = F::lit(3.0);
        let h00 = two * t3 - three * t2 + F::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Solves `eval(x) = y` for non-decreasing data, within `[xs[0], xs[n-1]]`.
    pub fn inverse(&self, y: F) -> Result<F> {
        let n = self.ys.len();
        let (lo_y, hi_y) = (self.ys[0], self.ys[n - 1]);
        if !(y >= lo_y && y <= hi_y) || hi_y <= lo_y {
            return Err(Error::domain(
                "MonotoneCubic::inverse",
                format!("target {y} outside tabulated range [{lo_y}, {hi_y}]"),
            ));
        }
        // first node at or above the target
        let k = self.ys.iter().position(|&v| v >= y).expect("target within range");
        if self.ys[k] == y {
            return Ok(self.xs[k]);
        }
        let (mut lo, mut hi) = (self.xs[k - 1], self.xs[k]);
        for _ in 0..200 {
            let mid = (lo + hi) / F::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / F::lit(2.0))
    }
}
