use serde::{Deserialize, Serialize};

use super::{nakagami_ccdf, OutageMethod, OutageResult};
use crate::channel::CollisionModel;
use crate::error::{Error, Result};
use crate::numerics::{log_gamma_ratio, poly};
use crate::Real;

/// Everything the conditional outage depends on once positions and
/// shadowing are fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalContext {
    /// `Ω₀, Ω₁, …, Ω_M`; index 0 is the source.
    pub omegas: Vec<Real>,
    /// SINR threshold (linear).
    pub beta: Real,
    pub collision: CollisionModel<Real>,
    /// Fractional in-band power.
    pub psi: Real,
    /// Source Nakagami parameter; must be an integer.
    pub m0: Real,
    /// Nakagami parameter of each interferer (`omegas.len() − 1` entries).
    pub m_i: Vec<Real>,
    /// `Γ`; may be infinite.
    pub snr_linear: Real,
}

impl ConditionalContext {
    pub fn validate(&self) -> Result<()> {
        if self.m0 < 1.0 || self.m0.fract() != 0.0 {
            return Err(Error::domain(
                "conditional_outage",
                format!("m0 = {} must be a positive integer", self.m0),
            ));
        }
        let Some((&omega0, rest)) = self.omegas.split_first() else {
            return Err(Error::domain("conditional_outage", "omegas must include the source"));
        };
        if !(omega0 > 0.0) {
            return Err(Error::domain("conditional_outage", "source power must be positive"));
        }
        if rest.iter().any(|&o| !(o >= 0.0)) {
            return Err(Error::domain("conditional_outage", "interferer powers must be non-negative"));
        }
        if rest.len() != self.m_i.len() {
            return Err(Error::domain(
                "conditional_outage",
                format!("{} interferer powers but {} Nakagami parameters", rest.len(), self.m_i.len()),
            ));
        }
        if self.m_i.iter().any(|&m| !(m > 0.0)) {
            return Err(Error::domain("conditional_outage", "interferer Nakagami parameters must be positive"));
        }
        if !(self.beta > 0.0) || !(self.snr_linear > 0.0) {
            return Err(Error::domain("conditional_outage", "beta and snr must be positive"));
        }
        Ok(())
    }

    pub(crate) fn m0_int(&self) -> usize {
        self.m0 as usize
    }

    /// `β₀ = βm₀/(ψΩ₀)`.
    pub fn beta0(&self) -> Real {
        self.beta * self.m0 / (self.psi * self.omegas[0])
    }
}

/// `G_0(Ω_i), …, G_{len−1}(Ω_i)` for one interferer with normalized power
/// `omega` and Nakagami parameter `m`.
pub fn g_coefficients(
    omega: Real,
    m: Real,
    len: usize,
    beta0: Real,
    collision: &CollisionModel<Real>,
    psi: Real,
) -> Vec<Real> {
    let phi = |x: Real, l: i32| {
        let s = x * omega / m;
        s.powi(l) * (s * beta0 + 1.0).powf(-(m + l as Real))
    };
    (0..len)
        .map(|l| {
            let li = l as i32;
            let mut g = log_gamma_ratio(l as u32, m)
                * (collision.p_c * phi(psi, li) + collision.p_a * phi(collision.k_s, li));
            if l == 0 {
                g += collision.p_n;
            }
            g
        })
        .collect()
}

/// `H_0, …, H_{len−1}`: coefficients of the truncated product of the
/// per-interferer series `Σ_ℓ G_ℓ(Ω_i) t^ℓ`.
pub fn hk_all(per_interferer: &[Vec<Real>], len: usize) -> Vec<Real> {
    let mut acc = vec![0.0; len];
    if len == 0 {
        return acc;
    }
    acc[0] = 1.0;
    for g in per_interferer {
        acc = poly::mul_truncated(&acc, g, len);
    }
    acc
}

/// `H_k(Ω) = Σ_{ℓ₁+…+ℓ_M = k} Π_i G_{ℓ_i}(Ω_i)`, computed as a coefficient of
/// a truncated polynomial product rather than by enumerating compositions.
pub fn hk_fold(per_interferer: &[Vec<Real>], k: usize) -> Real {
    hk_all(per_interferer, k + 1)[k]
}

/// Outage probability conditioned on the normalized powers.
pub fn conditional_outage(ctx: &ConditionalContext) -> Result<OutageResult> {
    ctx.validate()?;
    let m0 = ctx.m0_int();
    let beta0 = ctx.beta0();
    let coeffs: Vec<Vec<Real>> = ctx.omegas[1..]
        .iter()
        .zip(&ctx.m_i)
        .map(|(&omega, &m)| g_coefficients(omega, m, m0, beta0, &ctx.collision, ctx.psi))
        .collect();
    let h = hk_all(&coeffs, m0);
    let ccdf = nakagami_ccdf(beta0, 1.0 / ctx.snr_linear, &h);
    OutageResult::deterministic(1.0 - ccdf, OutageMethod::ConditionalClosedForm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::collision_probabilities;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctx(omegas: Vec<Real>, m_i: Vec<Real>, m0: Real, l: u32, psi: Real, beta: Real, snr: Real) -> ConditionalContext {
        ConditionalContext {
            omegas,
            beta,
            collision: collision_probabilities(l, 1.0, psi).unwrap(),
            psi,
            m0,
            m_i,
            snr_linear: snr,
        }
    }

    #[test]
    fn rayleigh_without_interference() {
        let c = ctx(vec![1.0], vec![], 1.0, 10, 1.0, 2.0, 10.0);
        let r = conditional_outage(&c).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-0.2f64).exp(), max_relative = 1e-14);
        assert_eq!(r.method, OutageMethod::ConditionalClosedForm);
        assert_eq!((r.mc_std_err, r.trials), (0.0, 0));
    }

    #[test]
    fn rayleigh_ratio_noise_free() {
        // P[g0 <= g1] for two unit exponentials = 1/2
        let c = ctx(vec![1.0, 1.0], vec![1.0], 1.0, 1, 1.0, 1.0, Real::INFINITY);
        assert_relative_eq!(conditional_outage(&c).unwrap().value, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn noise_free_without_interference_never_fails() {
        let c = ctx(vec![0.3], vec![], 4.0, 10, 0.96, 3.0, Real::INFINITY);
        assert!(conditional_outage(&c).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn rejects_non_integer_m0() {
        let c = ctx(vec![1.0], vec![], 2.5, 10, 0.96, 3.0, 10.0);
        assert!(matches!(conditional_outage(&c), Err(Error::Domain { .. })));
    }

    #[test]
    fn hk_trivial_cases() {
        let gs = vec![vec![0.5, 0.2, 0.1], vec![0.7, 0.05, 0.01]];
        assert_relative_eq!(hk_fold(&gs, 0), 0.35);
        assert_eq!(hk_fold(&gs[..1], 2), 0.1);
        assert_eq!(hk_fold(&[], 0), 1.0);
        assert_eq!(hk_fold(&[], 2), 0.0);
    }

    fn brute_force_hk(gs: &[Vec<Real>], k: usize) -> Real {
        // sum over all compositions (l_1..l_M) of k
        fn rec(gs: &[Vec<Real>], k: usize) -> Real {
            match gs.split_first() {
                None => if k == 0 { 1.0 } else { 0.0 },
                Some((g, rest)) => (0..=k.min(g.len() - 1)).map(|l| g[l] * rec(rest, k - l)).sum(),
            }
        }
        rec(gs, k)
    }

    proptest! {
        #[test]
        fn hk_matches_composition_enumeration(
            m in 0usize..=4,
            m0 in 1usize..=5,
            seed in proptest::collection::vec(0.001f64..1.0, 20),
        ) {
            let gs: Vec<Vec<Real>> = (0..m).map(|i| (0..m0).map(|l| seed[(i * 5 + l) % 20]).collect()).collect();
            for k in 0..m0 {
                let fast = hk_fold(&gs, k);
                let slow = brute_force_hk(&gs, k);
                prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1e-300));
            }
        }

        #[test]
        fn monotone_in_snr_beta_and_source_power(
            o1 in 0.05f64..3.0, o2 in 0.05f64..3.0, m0 in 1u32..5, snr in 0.5f64..50.0, beta in 0.2f64..8.0,
        ) {
            let base = ctx(vec![1.0, o1, o2], vec![1.0, 2.0], m0 as Real, 7, 0.96, beta, snr);
            let e = conditional_outage(&base).unwrap().value;
            let mut c = base.clone();
            c.snr_linear = snr * 1.5;
            prop_assert!(conditional_outage(&c).unwrap().value <= e + 1e-12);
            let mut c = base.clone();
            c.beta = beta * 1.3;
            prop_assert!(conditional_outage(&c).unwrap().value >= e - 1e-12);
            let mut c = base.clone();
            c.omegas[0] = 1.4;
            prop_assert!(conditional_outage(&c).unwrap().value <= e + 1e-12);
        }
    }
}
