use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{simpson, QuadratureSpec};
use crate::Real;

use std::f64::consts::PI;

/// `h` used in place of an integer index on the spectrum path, where the
/// continuous PSD degenerates into spectral lines.
pub const H_NEAR_ONE: Real = 1.0 - 1e-4;

// sin(πx) with the argument reduced exactly first, so values near the
// zeros keep full relative precision.
fn sin_pi(x: Real) -> Real {
    let k = (2.0 * x).round();
    let r = PI * (x - 0.5 * k);
    match (k as i64).rem_euclid(4) {
        0 => r.sin(),
        1 => r.cos(),
        2 => -r.sin(),
        _ => -r.cos(),
    }
}

/// Baseband power spectrum of binary full-response CPFSK with rectangular
/// frequency pulse, normalized to unit power, as a function of `fT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    h: Real,
}

impl SpectrumProfile {
    /// Requires `0 < h < 1`.
    pub fn new(h: Real) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::domain("cpfsk_psd", format!("h = {h} must lie in (0, 1)")));
        }
        Ok(Self { h })
    }

    /// Spectrum for an index in `(0, 1]`, moving `h = 1` just inside the range.
    pub fn for_bandwidth(h: Real) -> Result<Self> {
        if h == 1.0 {
            Self::new(H_NEAR_ONE)
        } else {
            Self::new(h)
        }
    }

    pub fn h(&self) -> Real {
        self.h
    }

    pub fn psd(&self, f: Real) -> Real {
        let h = self.h;
        let (u, v) = (f + 0.5 * h, f - 0.5 * h);
        let (su, sv) = (sin_pi(u), sin_pi(v));
        let sinc = |s: Real, x: Real| if x == 0.0 { 1.0 } else { s / (PI * x) };
        let (a1, a2) = (sinc(su, u), sinc(sv, v));
        // cos 2πf − cos πh, 1 + ρ² − 2ρ cos 2πf and the α = ±πh numerators
        // in product form to avoid cancellation near the spectral lines
        let c0 = -2.0 * su * sv;
        let s2 = sin_pi(2.0 * f);
        let denom = c0 * c0 + s2 * s2;
        let sh2 = sin_pi(h).powi(2);
        let cross = (sh2 - 2.0 * su * su) * a1 * a1 + 2.0 * c0 * a1 * a2 + (sh2 - 2.0 * sv * sv) * a2 * a2;
        (0.5 * (a1 * a1 + a2 * a2) + 0.5 * cross / denom).max(0.0)
    }

    /// Power inside `[−w/2, w/2]`.
    pub fn in_band_power(&self, w: Real) -> Result<Real> {
        if !(w >= 0.0) {
            return Err(Error::domain("in_band_power", format!("bandwidth {w} must be non-negative")));
        }
        let spec = QuadratureSpec {
            panels: 8,
            max_panels: 1 << 16,
            abs_tol: 1e-11,
            rel_tol: 1e-9,
        };
        let x = w / 2.0;
        let mut total = 0.0;
        for (a, b) in graded_pieces(x) {
            total += simpson(|f| self.psd(f), a, b, &spec)?;
        }
        Ok(2.0 * total)
    }
}

// Sub-intervals of [0, x] graded geometrically toward every multiple of
// 1/2, where the PSD can develop narrow peaks as h approaches 0 or 1.
fn graded_pieces(x: Real) -> Vec<(Real, Real)> {
    let mut marks = vec![0.0];
    let mut k = 1.0;
    while k * 0.5 < x {
        marks.push(k * 0.5);
        k += 1.0;
    }
    marks.push(x);
    let mut out = Vec::new();
    for w in marks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mut cuts: Vec<Real> = vec![a, b];
        for j in 1..=12 {
            let d = half * 10f64.powi(-j);
            cuts.push(a + d);
            cuts.push(b - d);
        }
        cuts.push(a + half);
        cuts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        cuts.dedup();
        out.extend(cuts.windows(2).filter(|c| c[1] > c[0]).map(|c| (c[0], c[1])));
    }
    out
}

/// Normalized PSD of binary CPFSK at `fT`; `h` must lie in `(0, 1)`.
pub fn cpfsk_psd(h: Real, f: Real) -> Result<Real> {
    Ok(SpectrumProfile::new(h)?.psd(f))
}

/// Two-sided normalized bandwidth `W` holding the fraction `psi` of the
/// power. `h = 1` is evaluated at [`H_NEAR_ONE`].
pub fn fractional_power_bandwidth(h: Real, psi: Real) -> Result<Real> {
    let profile = SpectrumProfile::for_bandwidth(h)?;
    if !(psi > 0.5 && psi < 1.0) {
        return Err(Error::domain(
            "fractional_power_bandwidth",
            format!("psi = {psi} must lie in (0.5, 1)"),
        ));
    }
    let mut hi = 2.0;
    while profile.in_band_power(hi)? < psi {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::numeric(
                "fractional_power_bandwidth",
                format!("no bracket for psi = {psi} at h = {h}"),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-10 * hi {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if profile.in_band_power(mid)? < psi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric {
        what: "fractional_power_bandwidth",
        detail: format!("bisection did not converge for h = {h}, psi = {psi}"),
        best_estimate: Some(0.5 * (lo + hi)),
    })
}

/// `η = 1/W(h, ψ)`, symbols per second per hertz.
pub fn spectral_efficiency(h: Real, psi: Real) -> Result<Real> {
    Ok(1.0 / fractional_power_bandwidth(h, psi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn msk(f: Real) -> Real {
        16.0 / (PI * PI) * (2.0 * PI * f).cos().powi(2) / (1.0 - 16.0 * f * f).powi(2)
    }

    #[test]
    fn msk_special_case() {
        let p = SpectrumProfile::new(0.5).unwrap();
        for i in 0..200 {
            let f = -3.0 + 0.0311 * i as Real;
            if (16.0 * f * f - 1.0).abs() < 1e-6 {
                continue;
            }
            assert!((p.psd(f) - msk(f)).abs() < 1e-8, "f={f}");
        }
    }

    #[test]
    fn symmetric_and_normalized() {
        for h in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let p = SpectrumProfile::new(h).unwrap();
            for f in [0.05, 0.3, 0.77, 1.4] {
                assert_relative_eq!(p.psd(f), p.psd(-f), max_relative = 1e-12);
            }
            assert!(p.in_band_power(40.0).unwrap() > 0.995, "h={h}");
        }
        let p = SpectrumProfile::new(0.5).unwrap();
        assert!(p.in_band_power(40.0).unwrap() >= 0.999);
    }

    #[test]
    fn msk_99_percent_bandwidth() {
        let w = fractional_power_bandwidth(0.5, 0.99).unwrap();
        assert!((w - 1.1818).abs() < 1e-3, "{w}");
        assert_relative_eq!(spectral_efficiency(0.5, 0.99).unwrap() * w, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn bandwidth_monotone() {
        let mut prev = 0.0;
        for psi in [0.9, 0.93, 0.96, 0.99] {
            let w = fractional_power_bandwidth(0.7, psi).unwrap();
            assert!(w > prev);
            prev = w;
        }
        let mut prev = 0.0;
        for i in 0..=12 {
            let w = fractional_power_bandwidth(0.3 + 0.05 * i as Real, 0.96).unwrap();
            assert!(w > prev, "h index {i}");
            prev = w;
        }
    }

    #[test]
    fn domain_checks() {
        assert!(cpfsk_psd(1.0, 0.1).is_err());
        assert!(cpfsk_psd(0.0, 0.1).is_err());
        assert!(fractional_power_bandwidth(0.5, 0.4).is_err());
        assert!(fractional_power_bandwidth(1.0, 0.96).unwrap().is_finite());
    }
}
