use serde::{Deserialize, Serialize};

use super::{nelder_mead, nelder_mead_fixed, Coordinate, MctcObjective, NelderMeadOptions, Objective, OptimizationResult};
use crate::channel::{SystemConfig, WaveformParams};
use crate::cpfsk::RateThresholdTable;
use crate::error::{Error, Result};
use crate::outage::ShadowedOptions;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Value of the fixed coordinate.
    pub value: Real,
    pub result: OptimizationResult,
}

/// `max τ′` over the other three coordinates for each value of `fixed`.
pub fn profile_curve<O: Objective + ?Sized>(
    objective: &O,
    init: &WaveformParams,
    fixed: Coordinate,
    values: &[Real],
    opts: &NelderMeadOptions,
) -> Result<Vec<ProfilePoint>> {
    if values.is_empty() {
        return Err(Error::domain("profile_curve", "sweep must not be empty"));
    }
    values
        .iter()
        .map(|&value| {
            Ok(ProfilePoint {
                value,
                result: nelder_mead_fixed(objective, init, fixed, value, opts)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistancePoint {
    /// Normalized source distance `|X₀| / r_net`.
    pub r: Real,
    pub alpha: Real,
    pub r_net: Real,
    pub theta_opt: WaveformParams,
    pub tau_opt: Real,
}

/// Optimal waveform as a function of the normalized source distance
/// `r = |X₀|/r_net`, for each path-loss exponent. `|X₀|` and `M` stay as in
/// `cfg`; each `r` sets `r_net = |X₀|/r`.
pub fn psi_vs_distance(
    cfg: &SystemConfig,
    table: &RateThresholdTable,
    r_values: &[Real],
    alphas: &[Real],
    shadowed: &ShadowedOptions,
    opts: &NelderMeadOptions,
) -> Result<Vec<DistancePoint>> {
    let mut out = Vec::new();
    for &alpha in alphas {
        for &r in r_values {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::domain("psi_vs_distance", format!("r = {r} must lie in (0, 1]")));
            }
            let c = SystemConfig {
                alpha,
                r_net: cfg.x0_distance / r,
                ..cfg.clone()
            };
            let objective = MctcObjective::new(c.clone(), table)?.with_shadowed_options(*shadowed);
            let best = nelder_mead(&objective, &NelderMeadOptions::default_start(), opts)?;
            out.push(DistancePoint {
                r,
                alpha,
                r_net: c.r_net,
                theta_opt: best.theta_opt,
                tau_opt: best.tau_opt,
            });
        }
    }
    Ok(out)
}
