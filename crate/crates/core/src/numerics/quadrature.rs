//! Composite Simpson quadrature with interval halving.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerances and panel budget for [`simpson`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec<F> {
    /// Starting number of Simpson sub-intervals (even, at least 2).
    pub panels: usize,
    /// Halving stops with an error once this many panels would be exceeded.
    pub max_panels: usize,
    pub abs_tol: F,
    pub rel_tol: F,
}

impl<F: Scalar> Default for QuadratureSpec<F> {
    fn default() -> Self {
        Self {
            panels: 16,
            max_panels: 1 << 20,
            abs_tol: F::lit(1e-10),
            rel_tol: F::lit(1e-8),
        }
    }
}

impl<F: Scalar> QuadratureSpec<F> {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 2 || self.panels % 2 != 0 {
            return Err(Error::domain(
                "QuadratureSpec",
                format!("panels = {} must be even and at least 2", self.panels),
            ));
        }
        if self.max_panels < self.panels {
            return Err(Error::domain("QuadratureSpec", "max_panels below starting panels"));
        }
        if !(self.abs_tol >= F::zero() && self.rel_tol >= F::zero())
            || (self.abs_tol == F::zero() && self.rel_tol == F::zero())
        {
            return Err(Error::domain(
                "QuadratureSpec",
                "tolerances must be non-negative and not both zero",
            ));
        }
        Ok(())
    }

    fn met(&self, estimate: F, change: F) -> bool {
        change <= self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

/// Outcome of an adaptive Simpson run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonEstimate<F> {
    pub value: F,
    /// Panel count at which the tolerance was met.
    pub panels: usize,
}

/// Integrates `f` over `[a, b]` with composite Simpson, doubling the panel
/// count until two successive estimates agree to within the tolerances.
pub fn simpson<F, G>(f: G, a: F, b: F, spec: &QuadratureSpec<F>) -> Result<F>
where
    F: Scalar,
    G: FnMut(F) -> F,
{
    simpson_adaptive(f, a, b, spec).map(|e| e.value)
}

/// Same as [`simpson`] but also reports the panel count that was needed.
pub fn simpson_adaptive<F, G>(
    mut f: G,
    a: F,
    b: F,
    spec: &QuadratureSpec<F>,
) -> Result<SimpsonEstimate<F>>
where
    F: Scalar,
    G: FnMut(F) -> F,
{
    spec.validate()?;
    if !(a <= b) {
        return Err(Error::domain("simpson", format!("interval [{a}, {b}] is reversed")));
    }
    if a == b {
        return Ok(SimpsonEstimate {
            value: F::zero(),
            panels: spec.panels,
        });
    }
    let width = b - a;
    let mut n = spec.panels;
    let ends = f(a) + f(b);
    let mut odd = F::zero();
    let mut even = F::zero();
    let step = width / F::count(n);
    for i in 1..n {
        let v = f(a + step * F::count(i));
        if i % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    let mut estimate = step / F::lit(3.0) * (ends + F::lit(4.0) * odd + F::lit(2.0) * even);
    if !estimate.is_finite() {
        return Err(Error::numeric("simpson", "integrand is not finite on the interval"));
    }
    while 2 * n <= spec.max_panels {
        n *= 2;
        let step = width / F::count(n);
        even = even + odd;
        odd = F::zero();
        for i in (1..n).step_by(2) {
            odd = odd + f(a + step * F::count(i));
        }
        let next = step / F::lit(3.0) * (ends + F::lit(4.0) * odd + F::lit(2.0) * even);
        let change = (next - estimate).abs();
        estimate = next;
        if spec.met(next, change) {
            return Ok(SimpsonEstimate {
                value: next,
                panels: n,
            });
        }
    }
    Err(Error::Numeric {
        what: "simpson",
        detail: format!("tolerance not met with {} panels on [{a}, {b}]", spec.max_panels),
        best_estimate: estimate.to_f64(),
    })
}

/// Fixed composite Simpson rule: nodes and weights for `panels` sub-intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpsonRule<F> {
    pub nodes: Vec<F>,
    pub weights: Vec<F>,
}

impl<F: Scalar> SimpsonRule<F> {
    pub fn new(a: F, b: F, panels: usize) -> Self {
        assert!(panels >= 2 && panels % 2 == 0, "panels must be even");
        let step = (b - a) / F::count(panels);
        let third = step / F::lit(3.0);
        let nodes = (0..=panels).map(|i| a + step * F::count(i)).collect();
        let weights = (0..=panels)
            .map(|i| {
                if i == 0 || i == panels {
                    third
                } else if i % 2 == 1 {
                    F::lit(4.0) * third
                } else {
                    F::lit(2.0) * third
                }
            })
            .collect();
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(F::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}
