use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::capacity::{mctc_with, CapacityResult};
use crate::channel::{db_to_linear, CollisionModel, SystemConfig, WaveformParams};
use crate::cpfsk::{sinr_threshold, spectral_efficiency, RateThresholdTable};
use crate::error::Result;
use crate::outage::{avg_outage_shadowed_with, avg_outage_unshadowed_with, OutageResult, ShadowedOptions};
use crate::Real;

/// Anything that maps waveform parameters to a normalized capacity `τ′`.
pub trait Objective: Sync {
    fn tau(&self, wf: &WaveformParams) -> Result<Real>;
}

impl<F> Objective for F
where
    F: Fn(&WaveformParams) -> Result<Real> + Sync,
{
    fn tau(&self, wf: &WaveformParams) -> Result<Real> {
        self(wf)
    }
}

/// Whether adjacent-channel splatter enters the outage computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SplatterModel {
    /// Interference weight `K_s` from each adjacent channel; `η` at `ψ`.
    Included,
    /// All signal power treated as in-band (`ψ = 1`, no adjacent-channel
    /// collisions) while the bandwidth, and hence `η`, is still taken at
    /// `bandwidth_psi`.
    Neglected { bandwidth_psi: Real },
}

/// One evaluation of the capacity objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// `None` when `R` exceeds every tabulated rate at `h`; `τ′` is then 0.
    pub beta: Option<Real>,
    pub outage: Option<OutageResult>,
    pub capacity: CapacityResult,
}

/// `τ′(θ)` for a network configuration: threshold from the rate table,
/// outage from the analytic path matching `cfg.sigma_s_db`, and `η` from
/// the CPFSK bandwidth.
///
/// Unshadowed networks use the closed form; shadowed networks use the
/// hybrid average with a fixed seed, so every evaluation sees the same
/// source-shadowing samples.
pub struct MctcObjective<'a> {
    cfg: SystemConfig,
    table: &'a RateThresholdTable,
    splatter: SplatterModel,
    shadowed: ShadowedOptions,
    efficiency: Mutex<HashMap<(u64, u64), Real>>,
}

impl<'a> MctcObjective<'a> {
    pub fn new(cfg: SystemConfig, table: &'a RateThresholdTable) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            table,
            splatter: SplatterModel::Included,
            shadowed: ShadowedOptions::default(),
            efficiency: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_splatter(mut self, splatter: SplatterModel) -> Self {
        self.splatter = splatter;
        self
    }

    pub fn with_shadowed_options(mut self, opts: ShadowedOptions) -> Self {
        self.shadowed = opts;
        self
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn splatter(&self) -> SplatterModel {
        self.splatter
    }

    fn eta(&self, h: Real, psi: Real) -> Result<Real> {
        let key = (h.to_bits(), psi.to_bits());
        if let Some(&v) = self.efficiency.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = spectral_efficiency(h, psi)?;
        self.efficiency.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// Outage at `wf` for threshold `beta`, under this objective's splatter model.
    pub fn outage(&self, wf: &WaveformParams, beta: Real) -> Result<OutageResult> {
        let (psi, collision) = match self.splatter {
            SplatterModel::Included => (wf.psi, CollisionModel::new(wf.channels, self.cfg.duty_factor, wf.psi)?),
            SplatterModel::Neglected { .. } => (
                1.0,
                CollisionModel::new(wf.channels, self.cfg.duty_factor, 1.0)?.without_adjacent(),
            ),
        };
        if self.cfg.sigma_s_db == 0.0 {
            avg_outage_unshadowed_with(&self.cfg, psi, beta, &collision)
        } else {
            avg_outage_shadowed_with(&self.cfg, psi, beta, &collision, &self.shadowed)
        }
    }

    pub fn evaluate(&self, wf: &WaveformParams) -> Result<Evaluation> {
        wf.validate()?;
        let eta = match self.splatter {
            SplatterModel::Included => self.eta(wf.h, wf.psi)?,
            SplatterModel::Neglected { bandwidth_psi } => self.eta(wf.h, bandwidth_psi)?,
        };
        let (lowest, highest) = self.table.rate_range(wf.h)?;
        if wf.rate > highest {
            let never = OutageResult {
                value: 1.0,
                method: crate::outage::OutageMethod::UnshadowedAnalytic,
                mc_std_err: 0.0,
                trials: 0,
            };
            return Ok(Evaluation {
                beta: None,
                outage: None,
                capacity: mctc_with(&self.cfg, wf, eta, &never)?,
            });
        }
        // rates below the table floor are met at the lowest tabulated SNR
        let beta = if wf.rate <= lowest {
            db_to_linear(self.table.spec().snr_db_grid[0])
        } else {
            sinr_threshold(wf.rate, wf.h, self.table)?
        };
        let outage = self.outage(wf, beta)?;
        Ok(Evaluation {
            beta: Some(beta),
            outage: Some(outage),
            capacity: mctc_with(&self.cfg, wf, eta, &outage)?,
        })
    }
}

impl Objective for MctcObjective<'_> {
    fn tau(&self, wf: &WaveformParams) -> Result<Real> {
        Ok(self.evaluate(wf)?.capacity.tau_norm)
    }
}
