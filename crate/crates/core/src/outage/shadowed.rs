use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_probability, nakagami_ccdf, OutageMethod, OutageResult};
use crate::channel::{CollisionModel, SystemConfig, WaveformParams};
use crate::error::{Error, Result};
use crate::numerics::{erf_diff, log_gamma_ratio, poly, simpson_adaptive, QuadratureSpec, SimpsonRule};
use crate::simkit::rng::{blocks, Purpose, RngSpec};
use crate::Real;

/// Settings of the hybrid quadrature / Monte-Carlo shadowed average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowedOptions {
    /// Samples of the source shadowing.
    pub mc_draws: u64,
    pub quad: QuadratureSpec<Real>,
    pub seed: u64,
}

impl Default for ShadowedOptions {
    fn default() -> Self {
        Self {
            mc_draws: 10_000,
            quad: QuadratureSpec::default(),
            seed: 1,
        }
    }
}

// erfc(8.5) ~ 1.6e-33: the erf transitions are resolved well inside this.
const EDGE_HALF_WIDTH: Real = 8.5 * std::f64::consts::SQRT_2;

fn shadow_nepers(sigma_db: Real) -> Real {
    sigma_db * std::f64::consts::LN_10 / 10.0
}

/// Density of `Ω = c·10^(ξ/10)·r^−α` for `r` uniform in area over the
/// annulus and `ξ ~ N(0, σ²)` dB:
///
/// ```text
///   f(ω) = π c^(2/α) / (A α) · e^(2s²/α²) · [ζ(ω r_net^α / c) − ζ(ω r_ex^α / c)] · ω^−(2+α)/α
///   ζ(z) = erf( (ln z − 2s²/α) / (s√2) ),   s = σ ln(10) / 10
/// ```
pub fn shadowed_interferer_pdf(
    omega: Real,
    power_ratio: Real,
    alpha: Real,
    sigma_db: Real,
    r_ex: Real,
    r_net: Real,
) -> Real {
    if !(omega > 0.0) {
        return 0.0;
    }
    log_density(omega.ln(), power_ratio, alpha, sigma_db, r_ex, r_net) / omega
}

// Density of ln Ω at u, i.e. f(e^u)·e^u.
fn log_density(u: Real, c: Real, alpha: Real, sigma_db: Real, r_ex: Real, r_net: Real) -> Real {
    let s = shadow_nepers(sigma_db);
    let area = std::f64::consts::PI * (r_net * r_net - r_ex * r_ex);
    let shift = 2.0 * s * s / alpha;
    let arg = |r: Real| (u - c.ln() + alpha * r.ln() - shift) / (s * std::f64::consts::SQRT_2);
    let pref = std::f64::consts::PI * c.powf(2.0 / alpha) / (area * alpha)
        * (2.0 * s * s / (alpha * alpha)).exp();
    pref * erf_diff(arg(r_ex), arg(r_net)) * (-2.0 * u / alpha).exp()
}

/// Quadrature rule for `E_Ω[·]` of one class of interferer, in the variable
/// `u = ln ω`.
struct InterfererKernel {
    m: Real,
    omegas: Vec<Real>,
    weights: Vec<Real>,
    rising: Vec<Real>,
}

impl InterfererKernel {
    fn build(
        cfg: &SystemConfig,
        m: Real,
        c: Real,
        len: usize,
        probe_beta0: Real,
        psi: Real,
        quad: &QuadratureSpec<Real>,
    ) -> Result<Self> {
        let s = shadow_nepers(cfg.sigma_s_db);
        let shift = 2.0 * s * s / cfg.alpha;
        let half = EDGE_HALF_WIDTH * s;
        let centre_net = c.ln() - cfg.alpha * cfg.r_net.ln() + shift;
        let centre_ex = c.ln() - cfg.alpha * cfg.r_ex.ln() + shift;
        let segments = if centre_net + half < centre_ex - half {
            vec![
                (centre_net - half, centre_net + half),
                (centre_net + half, centre_ex - half),
                (centre_ex - half, centre_ex + half),
            ]
        } else {
            vec![(centre_net - half, centre_ex + half)]
        };
        let density = |u: Real| log_density(u, c, cfg.alpha, cfg.sigma_s_db, cfg.r_ex, cfg.r_net);
        let probe = |u: Real, l: i32| {
            let q = psi * u.exp() / m;
            density(u) * q.powi(l) * (q * probe_beta0 + 1.0).powf(-(m + l as Real))
        };
        let mut omegas = Vec::new();
        let mut weights = Vec::new();
        for (a, b) in segments {
            let mut panels = quad.panels;
            panels = panels.max(simpson_adaptive(density, a, b, quad)?.panels);
            for l in [0, len as i32 - 1] {
                panels = panels.max(simpson_adaptive(|u| probe(u, l), a, b, quad)?.panels);
            }
            let rule = SimpsonRule::new(a, b, panels);
            for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                let d = density(u);
                if d > 0.0 {
                    omegas.push(u.exp());
                    weights.push(w * d);
                }
            }
        }
        let rising = (0..len).map(|l| log_gamma_ratio(l as u32, m)).collect();
        Ok(Self {
            m,
            omegas,
            weights,
            rising,
        })
    }

    // E_Ω[Γ(ℓ+m)/(ℓ!Γ(m)) φ_ℓ(χ)] for ℓ < out.len(), written into `out`.
    fn phi_moments(&self, chi: Real, beta0: Real, out: &mut [Real]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        if chi == 0.0 {
            out[0] = 1.0;
            return;
        }
        let m = self.m;
        for (&omega, &w) in self.omegas.iter().zip(&self.weights) {
            let q = chi * omega / m;
            let base = 1.0 / (q * beta0 + 1.0);
            let ratio = q * base;
            let mut term = w * base.powf(m);
            for v in out.iter_mut() {
                *v += term;
                term *= ratio;
            }
        }
        for (v, k) in out.iter_mut().zip(&self.rising) {
            *v *= k;
        }
    }
}

/// Spatially averaged outage under log-normal shadowing, fixed `|X₀|`.
pub fn avg_outage_shadowed(
    cfg: &SystemConfig,
    wf: &WaveformParams,
    beta: Real,
    opts: &ShadowedOptions,
) -> Result<OutageResult> {
    let collision = CollisionModel::new(wf.channels, cfg.duty_factor, wf.psi)?;
    avg_outage_shadowed_with(cfg, wf.psi, beta, &collision, opts)
}

/// As [`avg_outage_shadowed`] with an explicit collision model.
pub fn avg_outage_shadowed_with(
    cfg: &SystemConfig,
    psi: Real,
    beta: Real,
    collision: &CollisionModel<Real>,
    opts: &ShadowedOptions,
) -> Result<OutageResult> {
    cfg.validate()?;
    opts.quad.validate()?;
    if !(cfg.sigma_s_db > 0.0) {
        return Err(Error::domain("avg_outage_shadowed", "sigma_s_db must be positive"));
    }
    if !(cfg.r_ex > 0.0) {
        return Err(Error::domain("avg_outage_shadowed", "r_ex must be positive"));
    }
    if opts.mc_draws == 0 {
        return Err(Error::domain("avg_outage_shadowed", "mc_draws must be at least 1"));
    }
    if !(beta > 0.0) {
        return Err(Error::domain("avg_outage_shadowed", "beta must be positive"));
    }
    let m0 = cfg.m0 as usize;
    let median_beta0 = beta * cfg.m0 as Real / (psi * cfg.source_power());

    // interferers grouped by (m_i, c_i)
    let mut classes: Vec<(Real, Real, usize)> = Vec::new();
    for i in 0..cfg.num_interferers {
        let key = (cfg.nakagami(i), cfg.power_ratio(i));
        match classes.iter_mut().find(|(m, c, _)| (*m, *c) == key) {
            Some(entry) => entry.2 += 1,
            None => classes.push((key.0, key.1, 1)),
        }
    }
    let kernels = classes
        .iter()
        .map(|&(m, c, n)| {
            InterfererKernel::build(cfg, m, c, m0, median_beta0, psi, &opts.quad).map(|k| (k, n))
        })
        .collect::<Result<Vec<_>>>()?;

    let z = 1.0 / cfg.snr_linear();
    let noise = Normal::new(0.0, cfg.sigma_s_db).expect("positive sigma");
    let rng = RngSpec::new(opts.seed);
    let conditional = |xi0: Real| -> Real {
        let y = cfg.source_power() * 10f64.powf(xi0 / 10.0);
        let beta0 = beta * cfg.m0 as Real / (psi * y);
        let mut h = vec![0.0; m0];
        h[0] = 1.0;
        let mut co = vec![0.0; m0];
        let mut adj = vec![0.0; m0];
        for (kernel, count) in &kernels {
            kernel.phi_moments(psi, beta0, &mut co);
            kernel.phi_moments(collision.k_s, beta0, &mut adj);
            let g: Vec<Real> = (0..m0)
                .map(|l| {
                    let delta = if l == 0 { collision.p_n } else { 0.0 };
                    delta + collision.p_c * co[l] + collision.p_a * adj[l]
                })
                .collect();
            h = poly::mul_truncated(&h, &poly::pow_truncated(&g, *count, m0), m0);
        }
        1.0 - nakagami_ccdf(beta0, z, &h)
    };
    let partial: Vec<(Real, Real)> = blocks(opts.mc_draws)
        .into_par_iter()
        .map(|block| {
            let mut r = rng.substream(block.index, Purpose::SourceShadowing);
            (0..block.len).fold((0.0, 0.0), |(s, s2), _| {
                let e = conditional(noise.sample(&mut r));
                (s + e, s2 + e * e)
            })
        })
        .collect();
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |(a, b), &(s, s2)| (a + s, b + s2));
    let n = opts.mc_draws as Real;
    let mean = sum / n;
    let var = if opts.mc_draws > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let value = check_probability(mean, OutageMethod::ShadowedHybrid)?;
    Ok(OutageResult {
        value,
        method: OutageMethod::ShadowedHybrid,
        mc_std_err: (var / n).sqrt(),
        trials: opts.mc_draws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::simpson;
    use crate::outage::avg_outage_unshadowed_with;
    use approx::assert_relative_eq;

    #[test]
    fn interferer_density_integrates_to_one() {
        let spec = QuadratureSpec::default();
        for &(alpha, sigma, r_ex, r_net) in &[(3.0, 8.0, 0.25, 2.0), (4.0, 4.0, 0.25, 4.0), (3.5, 0.5, 0.5, 1.0)] {
            let total = simpson(
                |u| log_density(u, 1.3, alpha, sigma, r_ex, r_net),
                -80.0,
                80.0,
                &spec,
            )
            .unwrap();
            assert_relative_eq!(total, 1.0, max_relative = 1e-7);
        }
    }

    #[test]
    fn vanishing_shadowing_recovers_unshadowed() {
        let base = SystemConfig {
            sigma_s_db: 0.0,
            ..SystemConfig::reference_network()
        };
        let shadowed = SystemConfig {
            sigma_s_db: 1e-3,
            ..base.clone()
        };
        let collision = CollisionModel::new(38.0, 1.0, 0.96).unwrap();
        let a = avg_outage_unshadowed_with(&base, 0.96, 4.0, &collision).unwrap().value;
        let opts = ShadowedOptions {
            mc_draws: 64,
            ..Default::default()
        };
        let b = avg_outage_shadowed_with(&shadowed, 0.96, 4.0, &collision, &opts).unwrap();
        assert!((a - b.value).abs() < 1e-3, "{a} vs {}", b.value);
        assert_eq!(b.method, OutageMethod::ShadowedHybrid);
    }

    #[test]
    fn same_seed_same_value() {
        let cfg = SystemConfig::reference_network();
        let wf = WaveformParams::new(38.0, 0.64, 0.81, 0.96).unwrap();
        let opts = ShadowedOptions {
            mc_draws: 500,
            ..Default::default()
        };
        let a = avg_outage_shadowed(&cfg, &wf, 4.0, &opts).unwrap();
        let b = avg_outage_shadowed(&cfg, &wf, 4.0, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.mc_std_err > 0.0 && a.trials == 500);
    }

    #[test]
    fn rejects_missing_shadowing() {
        let cfg = SystemConfig {
            sigma_s_db: 0.0,
            ..SystemConfig::reference_network()
        };
        let wf = WaveformParams::new(38.0, 0.64, 0.81, 0.96).unwrap();
        assert!(avg_outage_shadowed(&cfg, &wf, 4.0, &ShadowedOptions::default()).is_err());
    }
}
