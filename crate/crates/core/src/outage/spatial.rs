use super::{nakagami_ccdf, OutageMethod, OutageResult};
use crate::channel::{CollisionModel, SystemConfig, WaveformParams};
use crate::error::{Error, Result};
use crate::numerics::{gauss_2f1, log_gamma_ratio, poly};
use crate::Real;

/// Average of `Γ(ℓ+m)/(ℓ!Γ(m)) · φ(x)` over an interferer placed uniformly in
/// the annulus, where
/// `φ(x) = (xΩ/m)^ℓ (xβ₀Ω/m + 1)^−(m+ℓ)` and `Ω = c·r^−α`.
///
/// With `b = m + 2/α` and `X_r = x·c/r^α` the average is
///
/// ```text
///   Γ(ℓ+m)/(ℓ!Γ(m)) · 2π m^m / (A α β₀^(m+ℓ)) · [ r_net² I(X_net) − r_ex² I(X_ex) ]
///   I(X) = ₂F₁(m+ℓ, b; b+1; −m/(Xβ₀)) / (X^m b)
/// ```
///
/// `x = 0` (no power in the band) gives the Kronecker delta `δ_ℓ`.
pub fn expected_g(
    l: u32,
    m: Real,
    power_ratio: Real,
    x: Real,
    beta0: Real,
    alpha: Real,
    r_ex: Real,
    r_net: Real,
) -> Result<Real> {
    if x == 0.0 {
        return Ok(if l == 0 { 1.0 } else { 0.0 });
    }
    if !(r_ex > 0.0) {
        return Err(Error::domain(
            "expected_g",
            "r_ex must be positive for the spatial average (I diverges at r = 0)",
        ));
    }
    let b = m + 2.0 / alpha;
    let a = m + l as Real;
    let area = std::f64::consts::PI * (r_net * r_net - r_ex * r_ex);
    // r² · (m/(Xβ₀))^m · ₂F₁(...) / b, in log form to keep (m/(Xβ₀))^m finite
    let term = |r: Real| -> Result<Real> {
        let xr = x * power_ratio * r.powf(-alpha);
        let v = m / (xr * beta0);
        let f = gauss_2f1(a, b, b + 1.0, -v)?;
        Ok(r * r * (m * v.ln() + f.ln()).exp() / b)
    };
    let bracket = term(r_net)? - term(r_ex)?;
    let scale = log_gamma_ratio(l, m) * 2.0 * std::f64::consts::PI / (area * alpha) * beta0.powi(-(l as i32));
    Ok(scale * bracket)
}

/// Per-interferer spatial average of `G_ℓ`, `ℓ < len`.
fn expected_g_series(
    cfg: &SystemConfig,
    i: usize,
    len: usize,
    beta0: Real,
    psi: Real,
    collision: &CollisionModel<Real>,
) -> Result<Vec<Real>> {
    let (m, c) = (cfg.nakagami(i), cfg.power_ratio(i));
    (0..len)
        .map(|l| {
            let l32 = l as u32;
            let co = expected_g(l32, m, c, psi, beta0, cfg.alpha, cfg.r_ex, cfg.r_net)?;
            let adj = if collision.p_a == 0.0 {
                0.0
            } else {
                expected_g(l32, m, c, collision.k_s, beta0, cfg.alpha, cfg.r_ex, cfg.r_net)?
            };
            let delta = if l == 0 { collision.p_n } else { 0.0 };
            Ok(delta + collision.p_c * co + collision.p_a * adj)
        })
        .collect()
}

/// Spatially averaged outage without shadowing, source at fixed `|X₀|`.
pub fn avg_outage_unshadowed(cfg: &SystemConfig, wf: &WaveformParams, beta: Real) -> Result<OutageResult> {
    let collision = CollisionModel::new(wf.channels, cfg.duty_factor, wf.psi)?;
    avg_outage_unshadowed_with(cfg, wf.psi, beta, &collision)
}

/// As [`avg_outage_unshadowed`] with an explicit collision model (e.g. with
/// the adjacent-channel term removed).
pub fn avg_outage_unshadowed_with(
    cfg: &SystemConfig,
    psi: Real,
    beta: Real,
    collision: &CollisionModel<Real>,
) -> Result<OutageResult> {
    cfg.validate()?;
    if cfg.sigma_s_db != 0.0 {
        return Err(Error::domain(
            "avg_outage_unshadowed",
            format!("sigma_s_db = {} but the unshadowed average needs 0", cfg.sigma_s_db),
        ));
    }
    if !(beta > 0.0) {
        return Err(Error::domain("avg_outage_unshadowed", "beta must be positive"));
    }
    let m0 = cfg.m0 as usize;
    let beta0 = beta * cfg.m0 as Real / (psi * cfg.source_power());
    let n = cfg.num_interferers;
    let h = if n == 0 {
        poly::pow_truncated(&[1.0], 0, m0)
    } else if cfg.identical_interferers() {
        let g = expected_g_series(cfg, 0, m0, beta0, psi, collision)?;
        poly::pow_truncated(&g, n, m0)
    } else {
        let per = (0..n)
            .map(|i| expected_g_series(cfg, i, m0, beta0, psi, collision))
            .collect::<Result<Vec<_>>>()?;
        super::hk_all(&per, m0)
    };
    let ccdf = nakagami_ccdf(beta0, 1.0 / cfg.snr_linear(), &h);
    OutageResult::deterministic(1.0 - ccdf, OutageMethod::UnshadowedAnalytic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::PerInterferer;
    use crate::outage::{conditional_outage, ConditionalContext};
    use approx::assert_relative_eq;

    fn unshadowed(m0: u32, m: Real) -> SystemConfig {
        SystemConfig {
            sigma_s_db: 0.0,
            m0,
            m_i: PerInterferer::Shared(m),
            ..SystemConfig::reference_network()
        }
    }

    #[test]
    fn no_interferers_matches_conditional() {
        let cfg = SystemConfig {
            num_interferers: 0,
            ..unshadowed(3, 1.0)
        };
        let wf = WaveformParams::new(20.0, 0.5, 0.7, 0.96).unwrap();
        let a = avg_outage_unshadowed(&cfg, &wf, 2.5).unwrap().value;
        let ctx = ConditionalContext {
            omegas: vec![1.0],
            beta: 2.5,
            collision: CollisionModel::new(20.0, 1.0, 0.96).unwrap(),
            psi: 0.96,
            m0: 3.0,
            m_i: vec![],
            snr_linear: 10.0,
        };
        assert_relative_eq!(a, conditional_outage(&ctx).unwrap().value, max_relative = 1e-14);
    }

    #[test]
    fn heterogeneous_path_agrees_with_identical_fast_path() {
        let cfg = unshadowed(4, 1.0);
        let wf = WaveformParams::new(38.0, 0.64, 0.81, 0.96).unwrap();
        let fast = avg_outage_unshadowed(&cfg, &wf, 4.0).unwrap().value;
        let mut listed = cfg.clone();
        listed.m_i = PerInterferer::Each(vec![1.0; 50]);
        listed.power_ratios = PerInterferer::Each(vec![1.0; 49].into_iter().chain([1.0 + 1e-15]).collect());
        let slow = avg_outage_unshadowed(&listed, &wf, 4.0).unwrap().value;
        assert_relative_eq!(fast, slow, max_relative = 1e-10);
    }

    #[test]
    fn requires_exclusion_zone_and_no_shadowing() {
        let wf = WaveformParams::new(38.0, 0.64, 0.81, 0.96).unwrap();
        let mut cfg = unshadowed(1, 1.0);
        cfg.r_ex = 0.0;
        assert!(matches!(avg_outage_unshadowed(&cfg, &wf, 3.0), Err(Error::Domain { .. })));
        assert!(avg_outage_unshadowed(&SystemConfig::reference_network(), &wf, 3.0).is_err());
    }

    #[test]
    fn outage_grows_with_threshold_and_falls_with_snr() {
        let cfg = unshadowed(4, 1.0);
        let wf = WaveformParams::new(30.0, 0.6, 0.8, 0.96).unwrap();
        let mut prev = 0.0;
        for i in 1..30 {
            let e = avg_outage_unshadowed(&cfg, &wf, 0.3 * i as Real).unwrap().value;
            assert!(e >= prev - 1e-13);
            prev = e;
        }
        let mut prev = 1.0;
        for snr_db in [0.0, 5.0, 10.0, 20.0, 40.0] {
            let c = SystemConfig { snr_db, ..cfg.clone() };
            let e = avg_outage_unshadowed(&c, &wf, 3.0).unwrap().value;
            assert!(e <= prev + 1e-13);
            prev = e;
        }
    }
}
