//! Analytic outage probability.
//!
//! Three levels of averaging are provided:
//!
//! - [`conditional_outage`]: conditioned on the normalized powers `Ω`
//!   (positions and shadowing fixed), averaged over fading and collisions;
//! - [`avg_outage_unshadowed`]: additionally averaged over uniformly placed
//!   interferers, in closed form through `₂F₁`;
//! - [`avg_outage_shadowed`]: with log-normal shadowing, combining Simpson
//!   quadrature over each interferer's power with Monte-Carlo sampling of the
//!   source shadowing.
//!
//! All three share the Nakagami complementary cdf of [`nakagami_ccdf`] and
//! differ only in how the coefficients `H_k` are formed.

mod conditional;
mod shadowed;
mod spatial;

use serde::{Deserialize, Serialize};

pub use conditional::{conditional_outage, g_coefficients, hk_all, hk_fold, ConditionalContext};
pub use shadowed::{
    avg_outage_shadowed, avg_outage_shadowed_with, shadowed_interferer_pdf, ShadowedOptions,
};
pub use spatial::{avg_outage_unshadowed, avg_outage_unshadowed_with, expected_g};

use crate::error::{Error, Result};
use crate::Real;

/// How an outage value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutageMethod {
    ConditionalClosedForm,
    UnshadowedAnalytic,
    ShadowedHybrid,
    MonteCarlo,
}

impl OutageMethod {
    pub fn is_deterministic(self) -> bool {
        matches!(
            self,
            OutageMethod::ConditionalClosedForm | OutageMethod::UnshadowedAnalytic
        )
    }
}

/// An outage probability together with its Monte-Carlo error, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub value: Real,
    pub method: OutageMethod,
    /// Standard error; zero for deterministic methods.
    pub mc_std_err: Real,
    /// Monte-Carlo sample count; zero for deterministic methods.
    pub trials: u64,
}

impl OutageResult {
    pub(crate) fn deterministic(value: Real, method: OutageMethod) -> Result<Self> {
        Ok(Self {
            value: check_probability(value, method)?,
            method,
            mc_std_err: 0.0,
            trials: 0,
        })
    }
}

const BOUND_SLACK: Real = 1e-12;

/// Clamps rounding noise just outside `[0, 1]`; larger excursions are errors.
pub(crate) fn check_probability(value: Real, method: OutageMethod) -> Result<Real> {
    if !value.is_finite() || value < -BOUND_SLACK || value > 1.0 + BOUND_SLACK {
        return Err(Error::Numeric {
            what: "outage",
            detail: format!("{method:?} produced {value}, outside [0, 1]"),
            best_estimate: value.is_finite().then_some(value),
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Complementary cdf `F̄_Z(z)` of `Z = β⁻¹g₀Ω₀ − Σ I_i g_i Ω_i` for integer
/// source parameter `m₀ = h.len()`, given `β₀ = βm₀/(ψΩ₀)` and the
/// coefficients `H_0, …, H_{m₀−1}`.
///
/// `z = 0` (noise-free) is allowed.
pub fn nakagami_ccdf(beta0: Real, z: Real, h: &[Real]) -> Real {
    let m0 = h.len();
    let mut total = 0.0;
    let mut fact = vec![1.0; m0];
    for i in 1..m0 {
        fact[i] = fact[i - 1] * i as Real;
    }
    for (k, &hk) in h.iter().enumerate() {
        let mut inner = 0.0;
        for j in k..m0 {
            inner += beta0.powi(j as i32) * z.powi((j - k) as i32) / fact[j - k];
        }
        total += inner * hk;
    }
    (-beta0 * z).exp() * total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_checks() {
        assert_eq!(check_probability(-1e-14, OutageMethod::MonteCarlo).unwrap(), 0.0);
        assert_eq!(check_probability(1.0 + 1e-14, OutageMethod::MonteCarlo).unwrap(), 1.0);
        assert!(check_probability(1.0 + 1e-9, OutageMethod::MonteCarlo)
            .unwrap_err()
            .is_numeric());
        assert!(check_probability(Real::NAN, OutageMethod::MonteCarlo).is_err());
    }

    #[test]
    fn rayleigh_ccdf_is_exponential() {
        // m0 = 1, no interference: exp(-beta0 z)
        let v = nakagami_ccdf(2.0, 0.1, &[1.0]);
        assert!((v - (-0.2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gamma_ccdf_without_interference() {
        // m0 = 3, H = [1, 0, 0]: exp(-x)(1 + x + x^2/2) with x = beta0 z
        let (b0, z) = (4.0, 0.3);
        let x: f64 = b0 * z;
        let want = (-x).exp() * (1.0 + x + x * x / 2.0);
        assert!((nakagami_ccdf(b0, z, &[1.0, 0.0, 0.0]) - want).abs() < 1e-15);
    }
}
