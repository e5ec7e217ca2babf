//! Network and protocol model: annular geometry, path loss, Nakagami fading,
//! log-normal shadowing, duty factor, and the co-/adjacent-channel collision
//! mechanism of slow frequency hopping.

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// A per-interferer quantity given either once for all interferers or as a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerInterferer {
    Shared(Real),
    Each(Vec<Real>),
}

impl PerInterferer {
    pub fn get(&self, i: usize) -> Real {
        match self {
            PerInterferer::Shared(v) => *v,
            PerInterferer::Each(v) => v[i],
        }
    }

    fn is_uniform(&self) -> bool {
        match self {
            PerInterferer::Shared(_) => true,
            PerInterferer::Each(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }

    fn validate(&self, field: &str, count: usize, ok: impl Fn(Real) -> bool) -> Result<()> {
        match self {
            PerInterferer::Shared(v) if !ok(*v) => Err(Error::config(field, format!("value {v} out of range"))),
            PerInterferer::Shared(_) => Ok(()),
            PerInterferer::Each(v) => {
                if v.len() != count {
                    return Err(Error::config(
                        field,
                        format!("list has {} entries but M = {count}", v.len()),
                    ));
                }
                match v.iter().position(|x| !ok(*x)) {
                    Some(i) => Err(Error::config(format!("{field}[{i}]"), format!("value {} out of range", v[i]))),
                    None => Ok(()),
                }
            }
        }
    }
}

fn default_duty() -> Real {
    1.0
}

fn default_ratios() -> PerInterferer {
    PerInterferer::Shared(1.0)
}

/// Physical and network parameters of the reference link and its interferers.
///
/// `d₀`, `P₀` and the noise power only enter through the SNR `Γ` and the
/// power ratios `c_i = P_i/P₀`, so they are not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of potentially interfering mobiles.
    #[serde(rename = "M")]
    pub num_interferers: usize,
    /// Exclusion-zone radius.
    pub r_ex: Real,
    /// Network radius.
    pub r_net: Real,
    /// Path-loss exponent, greater than 2.
    pub alpha: Real,
    /// SNR at unit distance without fading or shadowing, in dB.
    pub snr_db: Real,
    #[serde(default = "default_duty")]
    pub duty_factor: Real,
    /// Shadowing standard deviation in dB; zero disables shadowing.
    #[serde(default)]
    pub sigma_s_db: Real,
    /// Nakagami parameter of the source link (integer).
    pub m0: u32,
    /// Nakagami parameter of each interferer link.
    pub m_i: PerInterferer,
    #[serde(default = "default_ratios")]
    pub power_ratios: PerInterferer,
    /// Distance from the source to the reference receiver.
    pub x0_distance: Real,
}

impl SystemConfig {
    /// The moderately dense example network: `r_net = 2`, `r_ex = 0.25`,
    /// `M = 50`, `α = 3`, `Γ = 10 dB`, `D = 1`, `|X₀| = 1`, mixed fading
    /// (`m₀ = 4`, `m_i = 1`) and 8 dB shadowing.
    pub fn reference_network() -> Self {
        Self {
            num_interferers: 50,
            r_ex: 0.25,
            r_net: 2.0,
            alpha: 3.0,
            snr_db: 10.0,
            duty_factor: 1.0,
            sigma_s_db: 8.0,
            m0: 4,
            m_i: PerInterferer::Shared(1.0),
            power_ratios: PerInterferer::Shared(1.0),
            x0_distance: 1.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SystemConfig = serde_json::from_str(text).map_err(|e| {
            Error::config(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: Real| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(field, "must be finite"))
            }
        };
        finite("r_ex", self.r_ex)?;
        finite("r_net", self.r_net)?;
        finite("alpha", self.alpha)?;
        finite("snr_db", self.snr_db)?;
        finite("x0_distance", self.x0_distance)?;
        if self.r_ex < 0.0 {
            return Err(Error::config("r_ex", "must be non-negative"));
        }
        if !(self.r_net > self.r_ex) {
            return Err(Error::config("r_net", "must exceed r_ex"));
        }
        if !(self.alpha > 2.0) {
            return Err(Error::config("alpha", "path-loss exponent must exceed 2"));
        }
        if !(self.duty_factor > 0.0 && self.duty_factor <= 1.0) {
            return Err(Error::config("duty_factor", "must lie in (0, 1]"));
        }
        if !(self.sigma_s_db >= 0.0 && self.sigma_s_db.is_finite()) {
            return Err(Error::config("sigma_s_db", "must be a non-negative finite value"));
        }
        if self.m0 == 0 {
            return Err(Error::config("m0", "must be a positive integer"));
        }
        if !(self.x0_distance > 0.0 && self.x0_distance <= self.r_net) {
            return Err(Error::config("x0_distance", "must lie in (0, r_net]"));
        }
        let positive = |v: Real| v > 0.0 && v.is_finite();
        self.m_i.validate("m_i", self.num_interferers, positive)?;
        self.power_ratios
            .validate("power_ratios", self.num_interferers, positive)?;
        Ok(())
    }

    /// Annulus area `π(r_net² − r_ex²)`.
    pub fn area(&self) -> Real {
        std::f64::consts::PI * (self.r_net * self.r_net - self.r_ex * self.r_ex)
    }

    /// Interferer density `λ = M/A`.
    pub fn density(&self) -> Real {
        self.num_interferers as Real / self.area()
    }

    pub fn snr_linear(&self) -> Real {
        db_to_linear(self.snr_db)
    }

    pub fn nakagami(&self, i: usize) -> Real {
        self.m_i.get(i)
    }

    pub fn power_ratio(&self, i: usize) -> Real {
        self.power_ratios.get(i)
    }

    /// True when every interferer shares the same `(m_i, c_i)`.
    pub fn identical_interferers(&self) -> bool {
        self.m_i.is_uniform() && self.power_ratios.is_uniform()
    }

    /// Normalized power of the source without shadowing, `|X₀|^(−α)`.
    pub fn source_power(&self) -> Real {
        self.x0_distance.powf(-self.alpha)
    }
}

pub fn db_to_linear(db: Real) -> Real {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: Real) -> Real {
    10.0 * x.log10()
}

/// The waveform parameters `θ = (L, R, h, ψ)` being optimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformParams {
    /// Number of frequency channels; real-valued while searching.
    #[serde(rename = "L")]
    pub channels: Real,
    /// Code rate.
    #[serde(rename = "R")]
    pub rate: Real,
    /// CPFSK modulation index.
    pub h: Real,
    /// Fractional in-band power.
    pub psi: Real,
}

impl WaveformParams {
    pub fn new(channels: Real, rate: Real, h: Real, psi: Real) -> Result<Self> {
        let wf = Self {
            channels,
            rate,
            h,
            psi,
        };
        wf.validate()?;
        Ok(wf)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.channels >= 1.0 && self.channels.is_finite()) {
            return Err(Error::config("L", "must be at least 1"));
        }
        if !(self.rate > 0.0 && self.rate < 1.0) {
            return Err(Error::config("R", "must lie in (0, 1)"));
        }
        if !(self.h > 0.0 && self.h <= 1.0) {
            return Err(Error::config("h", "must lie in (0, 1]"));
        }
        if !(self.psi > 0.5 && self.psi <= 1.0) {
            return Err(Error::config("psi", "must lie in (0.5, 1]"));
        }
        Ok(())
    }

    /// `L` rounded half-up to an integer channel count.
    pub fn rounded_channels(&self) -> u32 {
        (self.channels + 0.5).floor().max(1.0) as u32
    }

    /// Same parameters with `L` rounded for reporting.
    pub fn with_rounded_channels(&self) -> Self {
        Self {
            channels: self.rounded_channels() as Real,
            ..*self
        }
    }

    pub fn as_array(&self) -> [Real; 4] {
        [self.channels, self.rate, self.h, self.psi]
    }

    pub fn from_array(v: [Real; 4]) -> Self {
        Self {
            channels: v[0],
            rate: v[1],
            h: v[2],
            psi: v[3],
        }
    }
}

/// Probabilities that an interferer collides on the same channel (`p_c`),
/// an adjacent channel (`p_a`), or not at all (`p_n`), plus the splatter
/// ratio `K_s = (1 − ψ)/2` leaked into each adjacent channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionModel<T> {
    pub p_c: T,
    pub p_a: T,
    pub p_n: T,
    pub k_s: T,
}

impl<T> CollisionModel<T>
where
    T: Num + Copy + PartialOrd + std::fmt::Debug,
{
    /// Collision model for `channels ≥ 1` (any real or exact value), duty
    /// factor in `(0, 1]` and fractional in-band power `psi`.
    pub fn new(channels: T, duty: T, psi: T) -> Result<Self> {
        let one = T::one();
        let two = one + one;
        let three = two + one;
        if !(channels >= one) {
            return Err(Error::domain(
                "collision_probabilities",
                format!("L = {channels:?} must be at least 1"),
            ));
        }
        if !(duty > T::zero() && duty <= one) {
            return Err(Error::domain(
                "collision_probabilities",
                format!("duty factor {duty:?} outside (0, 1]"),
            ));
        }
        if !(psi >= T::zero() && psi <= one) {
            return Err(Error::domain(
                "collision_probabilities",
                format!("psi {psi:?} outside [0, 1]"),
            ));
        }
        let l2 = channels * channels;
        let p_c = duty / channels;
        let p_a = two * duty * (channels - one) / l2;
        let p_n = one - duty * (three * channels - two) / l2;
        Ok(Self {
            p_c,
            p_a,
            p_n,
            k_s: (one - psi) / two,
        })
    }

    /// Folds the adjacent-channel mass into "no collision", as when splatter
    /// is neglected.
    pub fn without_adjacent(&self) -> Self {
        Self {
            p_a: T::zero(),
            p_n: self.p_n + self.p_a,
            ..*self
        }
    }

    /// Interference weight `I_i` carried by an indicator value.
    pub fn weight(&self, indicator: Indicator, psi: T) -> T {
        match indicator {
            Indicator::CoChannel => psi,
            Indicator::Adjacent => self.k_s,
            Indicator::None => T::zero(),
        }
    }
}

/// Collision probabilities for an integer number of channels.
pub fn collision_probabilities(channels: u32, duty: Real, psi: Real) -> Result<CollisionModel<Real>> {
    CollisionModel::new(Real::from(channels), duty, psi)
}

/// Realization of the collision indicator of one interferer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Indicator {
    CoChannel,
    Adjacent,
    None,
}

/// One interferer's realized position, shadowing, fading and collision state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfererState {
    pub position_radius: Real,
    pub shadow_db: Real,
    pub fading_gain: Real,
    pub indicator: Indicator,
}

/// `Ω_i = c_i 10^(ξ_i/10) d^(−α)`.
pub fn normalized_power(power_ratio: Real, shadow_db: Real, distance: Real, alpha: Real) -> Result<Real> {
    if !(distance > 0.0) {
        return Err(Error::domain(
            "normalized_power",
            format!("distance {distance} must be positive"),
        ));
    }
    Ok(power_ratio * db_to_linear(shadow_db) * distance.powf(-alpha))
}

/// Instantaneous SINR `ψ g₀ Ω₀ / (Γ⁻¹ + Σ I_i g_i Ω_i)`; each interferer is
/// `(I_i, g_i, Ω_i)`.
pub fn instantaneous_sinr(
    g0: Real,
    omega0: Real,
    interferers: &[(Real, Real, Real)],
    psi: Real,
    snr_linear: Real,
) -> Real {
    let interference: Real = interferers.iter().map(|&(w, g, o)| w * g * o).sum();
    psi * g0 * omega0 / (1.0 / snr_linear + interference)
}
