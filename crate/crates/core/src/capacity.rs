//! Modulation-constrained transmission capacity.
//!
//! `τ′ = λ R D η(h, ψ) (1 − ε) / L`, the density of successful transmissions
//! times the per-link rate normalized by the total hopping bandwidth.

use serde::{Deserialize, Serialize};

use crate::channel::{SystemConfig, WaveformParams};
use crate::cpfsk::spectral_efficiency;
use crate::error::{Error, Result};
use crate::outage::OutageResult;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    /// Normalized capacity `τ′`, bps/Hz per unit area.
    pub tau_norm: Real,
    pub epsilon: Real,
    /// Per-link rate over total bandwidth, `b/B`.
    pub b_norm: Real,
    /// Interferer density `M/A`.
    pub lambda: Real,
}

/// `b/B = R D η / L` for a given spectral efficiency.
pub fn link_rate_norm_with(wf: &WaveformParams, duty: Real, eta: Real) -> Result<Real> {
    wf.validate()?;
    if !(duty > 0.0 && duty <= 1.0) {
        return Err(Error::domain("link_rate_norm", format!("D = {duty} must lie in (0, 1]")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain("link_rate_norm", format!("eta = {eta} must be positive")));
    }
    Ok(wf.rate * duty * eta / wf.channels)
}

/// `b/B = R D η(h, ψ) / L`.
pub fn link_rate_norm(wf: &WaveformParams, duty: Real) -> Result<Real> {
    link_rate_norm_with(wf, duty, spectral_efficiency(wf.h, wf.psi)?)
}

/// `τ′` with an explicit spectral efficiency.
pub fn mctc_with(cfg: &SystemConfig, wf: &WaveformParams, eta: Real, epsilon: &OutageResult) -> Result<CapacityResult> {
    let e = epsilon.value;
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::domain("mctc", format!("outage {e} must lie in [0, 1]")));
    }
    let b_norm = link_rate_norm_with(wf, cfg.duty_factor, eta)?;
    let lambda = cfg.density();
    Ok(CapacityResult {
        tau_norm: lambda * b_norm * (1.0 - e),
        epsilon: e,
        b_norm,
        lambda,
    })
}

/// `τ′` at `wf` for the outage `epsilon`, with `η = 1/W(h, ψ)`.
pub fn mctc(cfg: &SystemConfig, wf: &WaveformParams, epsilon: &OutageResult) -> Result<CapacityResult> {
    mctc_with(cfg, wf, spectral_efficiency(wf.h, wf.psi)?, epsilon)
}
