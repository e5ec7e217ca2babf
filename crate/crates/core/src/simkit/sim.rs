use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{blocks, Purpose, RngSpec};
use super::sample::{sample_annulus, sample_indicator, NakagamiGain};
use crate::channel::{db_to_linear, CollisionModel, Indicator, SystemConfig, WaveformParams};
use crate::error::{Error, Result};
use crate::outage::ConditionalContext;
use crate::Real;

/// Outage count over a batch of independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialBatchResult {
    pub outage_count: u64,
    pub trials: u64,
    pub epsilon_hat: Real,
    /// `sqrt(ε̂(1−ε̂)/trials)`.
    pub std_err: Real,
}

impl TrialBatchResult {
    pub fn from_counts(outage_count: u64, trials: u64) -> Self {
        let n = trials as Real;
        let p = outage_count as Real / n;
        Self {
            outage_count,
            trials,
            epsilon_hat: p,
            std_err: (p * (1.0 - p) / n).sqrt(),
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn covers(&self, value: Real, k: Real) -> bool {
        (value - self.epsilon_hat).abs() <= k * self.std_err
    }
}

/// Which random components a network trial redraws; the rest are drawn once
/// and held fixed for the whole batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resample {
    pub positions: bool,
    pub shadowing: bool,
    pub fading: bool,
    pub collisions: bool,
}

impl Resample {
    pub const ALL: Self = Self {
        positions: true,
        shadowing: true,
        fading: true,
        collisions: true,
    };

    /// Fixed network: only fading and collisions vary.
    pub const LINK: Self = Self {
        positions: false,
        shadowing: false,
        fading: true,
        collisions: true,
    };
}

/// How collision indicators are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionDraw {
    /// I.i.d. from `(p_c, p_a, p_n)`.
    #[default]
    Marginal,
    /// Source and each active interferer pick one of `L` channels uniformly;
    /// the indicator follows from the channel distance.
    ExplicitChannels,
}

struct Link<'a> {
    collision: &'a CollisionModel<Real>,
    psi: Real,
    inv_snr: Real,
    beta: Real,
    source_gain: NakagamiGain,
    gains: Vec<NakagamiGain>,
}

impl Link<'_> {
    fn weight(&self, indicator: Indicator) -> Real {
        self.collision.weight(indicator, self.psi)
    }

    fn is_outage(&self, g0: Real, omega0: Real, interference: Real) -> bool {
        self.psi * g0 * omega0 / (self.inv_snr + interference) <= self.beta
    }
}

fn gain_table(m: impl Iterator<Item = Real>) -> Result<Vec<NakagamiGain>> {
    let mut out: Vec<(Real, NakagamiGain)> = Vec::new();
    let mut table = Vec::new();
    for m in m {
        let g = match out.iter().find(|(k, _)| *k == m) {
            Some(&(_, g)) => g,
            None => {
                let g = NakagamiGain::new(m)?;
                out.push((m, g));
                g
            }
        };
        table.push(g);
    }
    Ok(table)
}

fn batch<F>(trials: u64, run_block: F) -> Result<TrialBatchResult>
where
    F: Fn(u64, u64) -> u64 + Sync,
{
    if trials == 0 {
        return Err(Error::domain("simulate", "trials must be at least 1"));
    }
    let count = blocks(trials)
        .into_par_iter()
        .map(|b| run_block(b.index, b.len))
        .sum();
    Ok(TrialBatchResult::from_counts(count, trials))
}

/// Empirical outage with the normalized powers in `ctx` held fixed; each
/// trial draws the source gain, then an indicator and gain per interferer.
pub fn simulate_conditional_outage(ctx: &ConditionalContext, trials: u64, rng: &RngSpec) -> Result<TrialBatchResult> {
    ctx.validate()?;
    let link = Link {
        collision: &ctx.collision,
        psi: ctx.psi,
        inv_snr: 1.0 / ctx.snr_linear,
        beta: ctx.beta,
        source_gain: NakagamiGain::new(ctx.m0)?,
        gains: gain_table(ctx.m_i.iter().copied())?,
    };
    let omega0 = ctx.omegas[0];
    let omegas = &ctx.omegas[1..];
    batch(trials, |block, len| {
        let mut r = rng.substream(block, Purpose::Fading);
        let mut count = 0;
        for _ in 0..len {
            let g0 = link.source_gain.sample(&mut r);
            let mut interference = 0.0;
            for (gain, &omega) in link.gains.iter().zip(omegas) {
                let w = link.weight(sample_indicator(link.collision, r.random()));
                let g = gain.sample(&mut r);
                interference += w * g * omega;
            }
            count += link.is_outage(g0, omega0, interference) as u64;
        }
        count
    })
}

struct Geometry {
    radii: Vec<Real>,
    shadows: Vec<Real>,
    source_shadow: Real,
}

fn draw_geometry(cfg: &SystemConfig, r: &mut ChaCha8Rng, positions: bool, shadowing: bool, out: &mut Geometry) {
    let span = cfg.r_net * cfg.r_net - cfg.r_ex * cfg.r_ex;
    let shadow = (cfg.sigma_s_db > 0.0).then(|| Normal::new(0.0, cfg.sigma_s_db).expect("positive sigma"));
    for i in 0..cfg.num_interferers {
        if positions {
            out.radii[i] = (r.random::<Real>() * span + cfg.r_ex * cfg.r_ex).sqrt();
        }
        if let (true, Some(n)) = (shadowing, &shadow) {
            out.shadows[i] = n.sample(r);
        }
    }
    if let (true, Some(n)) = (shadowing, &shadow) {
        out.source_shadow = n.sample(r);
    }
}

fn frozen_geometry(cfg: &SystemConfig, rng: &RngSpec) -> Result<Geometry> {
    let mut r = rng.substream(0, Purpose::Frozen);
    let radii = sample_annulus(cfg.num_interferers, cfg.r_ex, cfg.r_net, &mut r)?;
    let mut g = Geometry {
        radii,
        shadows: vec![0.0; cfg.num_interferers],
        source_shadow: 0.0,
    };
    draw_geometry(cfg, &mut r, false, true, &mut g);
    Ok(g)
}

fn powers(cfg: &SystemConfig, g: &Geometry, out: &mut [Real]) {
    out[0] = cfg.source_power() * db_to_linear(g.source_shadow);
    for i in 0..cfg.num_interferers {
        out[i + 1] = cfg.power_ratio(i) * db_to_linear(g.shadows[i]) * g.radii[i].powf(-cfg.alpha);
    }
}

/// `Ω₀, Ω₁, …, Ω_M` of the network realization that
/// [`simulate_network_outage`] holds fixed when positions and shadowing are
/// not resampled.
pub fn frozen_powers(cfg: &SystemConfig, rng: &RngSpec) -> Result<Vec<Real>> {
    cfg.validate()?;
    let g = frozen_geometry(cfg, rng)?;
    let mut out = vec![0.0; cfg.num_interferers + 1];
    powers(cfg, &g, &mut out);
    Ok(out)
}

/// Empirical outage of the full network model with i.i.d. collision
/// indicators.
pub fn simulate_network_outage(
    cfg: &SystemConfig,
    wf: &WaveformParams,
    beta: Real,
    trials: u64,
    rng: &RngSpec,
    resample: Resample,
) -> Result<TrialBatchResult> {
    simulate_network_outage_with(cfg, wf, beta, trials, rng, resample, CollisionDraw::Marginal)
}

/// As [`simulate_network_outage`] with a choice of collision mechanism.
/// [`CollisionDraw::ExplicitChannels`] uses `L` rounded to an integer.
pub fn simulate_network_outage_with(
    cfg: &SystemConfig,
    wf: &WaveformParams,
    beta: Real,
    trials: u64,
    rng: &RngSpec,
    resample: Resample,
    draw: CollisionDraw,
) -> Result<TrialBatchResult> {
    cfg.validate()?;
    wf.validate()?;
    if !(beta > 0.0) {
        return Err(Error::domain("simulate_network_outage", "beta must be positive"));
    }
    let channels = match draw {
        CollisionDraw::Marginal => wf.channels,
        CollisionDraw::ExplicitChannels => wf.rounded_channels() as Real,
    };
    let collision = CollisionModel::new(channels, cfg.duty_factor, wf.psi)?;
    let link = Link {
        collision: &collision,
        psi: wf.psi,
        inv_snr: 1.0 / cfg.snr_linear(),
        beta,
        source_gain: NakagamiGain::new(cfg.m0 as Real)?,
        gains: gain_table((0..cfg.num_interferers).map(|i| cfg.nakagami(i)))?,
    };
    let n = cfg.num_interferers;
    let frozen = frozen_geometry(cfg, rng)?;
    let mut frozen_link = rng.substream(0, Purpose::Frozen);
    // skip past the geometry draws so the frozen fading is independent of them
    frozen_link.set_word_pos(1 << 40);
    let frozen_g0 = link.source_gain.sample(&mut frozen_link);
    let frozen_fading: Vec<(Indicator, Real)> = link
        .gains
        .iter()
        .map(|g| (sample_indicator(&collision, frozen_link.random()), g.sample(&mut frozen_link)))
        .collect();
    let l_int = channels as u64;

    batch(trials, |block, len| {
        let mut geo_rng = rng.substream(block, Purpose::Geometry);
        let mut fade_rng = rng.substream(block, Purpose::Fading);
        let mut chan_rng = rng.substream(block, Purpose::Channels);
        let mut geo = Geometry {
            radii: frozen.radii.clone(),
            shadows: frozen.shadows.clone(),
            source_shadow: frozen.source_shadow,
        };
        let mut omegas = vec![0.0; n + 1];
        let fixed_geometry = !resample.positions && !resample.shadowing;
        if fixed_geometry {
            powers(cfg, &geo, &mut omegas);
        }
        let mut count = 0;
        for _ in 0..len {
            if !fixed_geometry {
                draw_geometry(cfg, &mut geo_rng, resample.positions, resample.shadowing, &mut geo);
                powers(cfg, &geo, &mut omegas);
            }
            let g0 = if resample.fading {
                link.source_gain.sample(&mut fade_rng)
            } else {
                frozen_g0
            };
            let source_channel = match (draw, resample.collisions) {
                (CollisionDraw::ExplicitChannels, true) => chan_rng.random_range(0..l_int),
                _ => 0,
            };
            let mut interference = 0.0;
            for i in 0..n {
                let indicator = if !resample.collisions {
                    frozen_fading[i].0
                } else {
                    match draw {
                        CollisionDraw::Marginal => sample_indicator(&collision, fade_rng.random()),
                        CollisionDraw::ExplicitChannels => {
                            let active = chan_rng.random::<Real>() < cfg.duty_factor;
                            let ch = chan_rng.random_range(0..l_int);
                            match (active, ch.abs_diff(source_channel)) {
                                (false, _) => Indicator::None,
                                (true, 0) => Indicator::CoChannel,
                                (true, 1) => Indicator::Adjacent,
                                _ => Indicator::None,
                            }
                        }
                    }
                };
                let g = if resample.fading {
                    link.gains[i].sample(&mut fade_rng)
                } else {
                    frozen_fading[i].1
                };
                interference += link.weight(indicator) * g * omegas[i + 1];
            }
            count += link.is_outage(g0, omegas[0], interference) as u64;
        }
        count
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::PerInterferer;
    use crate::outage::conditional_outage;

    #[test]
    fn single_trial_is_zero_or_one() {
        let ctx = ConditionalContext {
            omegas: vec![1.0, 0.5],
            beta: 2.0,
            collision: CollisionModel::new(5.0, 1.0, 0.96).unwrap(),
            psi: 0.96,
            m0: 2.0,
            m_i: vec![1.0],
            snr_linear: 10.0,
        };
        let r = simulate_conditional_outage(&ctx, 1, &RngSpec::new(1)).unwrap();
        assert!(r.epsilon_hat == 0.0 || r.epsilon_hat == 1.0);
        assert!(simulate_conditional_outage(&ctx, 0, &RngSpec::new(1)).is_err());
    }

    #[test]
    fn rayleigh_noise_only_matches_closed_form() {
        let ctx = ConditionalContext {
            omegas: vec![0.8],
            beta: 1.5,
            collision: CollisionModel::new(5.0, 1.0, 0.96).unwrap(),
            psi: 0.96,
            m0: 1.0,
            m_i: vec![],
            snr_linear: 4.0,
        };
        let want = 1.0 - (-1.5 / (4.0 * 0.96 * 0.8f64)).exp();
        let r = simulate_conditional_outage(&ctx, 200_000, &RngSpec::new(9)).unwrap();
        assert!(r.covers(want, 3.0), "{r:?} vs {want}");
    }

    #[test]
    fn fixed_network_equals_conditional_simulation() {
        let cfg = SystemConfig {
            num_interferers: 5,
            ..SystemConfig::reference_network()
        };
        let wf = WaveformParams::new(7.0, 0.5, 0.8, 0.96).unwrap();
        let rng = RngSpec::new(42);
        let net = simulate_network_outage(&cfg, &wf, 3.0, 10_000, &rng, Resample::LINK).unwrap();
        let ctx = ConditionalContext {
            omegas: frozen_powers(&cfg, &rng).unwrap(),
            beta: 3.0,
            collision: CollisionModel::new(7.0, 1.0, 0.96).unwrap(),
            psi: 0.96,
            m0: 4.0,
            m_i: vec![1.0; 5],
            snr_linear: cfg.snr_linear(),
        };
        let cond = simulate_conditional_outage(&ctx, 10_000, &rng).unwrap();
        assert_eq!(net, cond);
        let exact = conditional_outage(&ctx).unwrap().value;
        assert!(cond.covers(exact, 4.0));
    }

    #[test]
    fn explicit_channels_agree_with_marginal_model() {
        let cfg = SystemConfig {
            num_interferers: 10,
            sigma_s_db: 0.0,
            duty_factor: 0.7,
            m_i: PerInterferer::Shared(1.0),
            ..SystemConfig::reference_network()
        };
        let wf = WaveformParams::new(4.0, 0.5, 0.8, 0.9).unwrap();
        let rng = RngSpec::new(5);
        let a = simulate_network_outage_with(&cfg, &wf, 2.0, 100_000, &rng, Resample::ALL, CollisionDraw::Marginal)
            .unwrap();
        let b = simulate_network_outage_with(
            &cfg,
            &wf,
            2.0,
            100_000,
            &rng,
            Resample::ALL,
            CollisionDraw::ExplicitChannels,
        )
        .unwrap();
        let se = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
        assert!((a.epsilon_hat - b.epsilon_hat).abs() < 3.5 * se, "{a:?} {b:?}");
    }

    #[test]
    fn frozen_components_stay_fixed() {
        let cfg = SystemConfig {
            num_interferers: 3,
            ..SystemConfig::reference_network()
        };
        let wf = WaveformParams::new(2.0, 0.5, 0.8, 0.96).unwrap();
        let none = Resample {
            positions: false,
            shadowing: false,
            fading: false,
            collisions: false,
        };
        let r = simulate_network_outage(&cfg, &wf, 1.0, 5000, &RngSpec::new(3), none).unwrap();
        assert!(r.outage_count == 0 || r.outage_count == 5000);
    }
}
