use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::channel::{CollisionModel, Indicator};
use crate::error::{Error, Result};
use crate::Real;

/// Radii of `count` points uniform in area over the annulus
/// `r_ex ≤ r ≤ r_net`. Angles do not affect any distance to the receiver at
/// the origin, so none are drawn.
pub fn sample_annulus<R: Rng + ?Sized>(count: usize, r_ex: Real, r_net: Real, rng: &mut R) -> Result<Vec<Real>> {
    if !(r_ex >= 0.0 && r_net > r_ex && r_net.is_finite()) {
        return Err(Error::domain(
            "sample_annulus",
            format!("need 0 <= r_ex < r_net, got r_ex = {r_ex}, r_net = {r_net}"),
        ));
    }
    let span = r_net * r_net - r_ex * r_ex;
    Ok((0..count)
        .map(|_| (rng.random::<Real>() * span + r_ex * r_ex).sqrt())
        .collect())
}

/// Power gain of unit-mean Nakagami-`m` fading, `Gamma(m, 1/m)`.
#[derive(Debug, Clone, Copy)]
pub struct NakagamiGain {
    dist: Gamma<Real>,
}

impl NakagamiGain {
    pub fn new(m: Real) -> Result<Self> {
        Gamma::new(m, 1.0 / m)
            .map(|dist| Self { dist })
            .map_err(|e| Error::domain("sample_nakagami_gain", format!("m = {m}: {e}")))
    }
}

impl Distribution<Real> for NakagamiGain {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Real {
        self.dist.sample(rng)
    }
}

/// One draw of a Nakagami-`m` power gain.
pub fn sample_nakagami_gain<R: Rng + ?Sized>(m: Real, rng: &mut R) -> Result<Real> {
    Ok(NakagamiGain::new(m)?.sample(rng))
}

/// Maps a uniform variate on `[0, 1)` to a collision indicator.
pub fn sample_indicator(collision: &CollisionModel<Real>, u: Real) -> Indicator {
    if u < collision.p_c {
        Indicator::CoChannel
    } else if u < collision.p_c + collision.p_a {
        Indicator::Adjacent
    } else {
        Indicator::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkit::{Purpose, RngSpec};

    #[test]
    fn annulus_support_and_area_law() {
        let mut rng = RngSpec::new(3).substream(0, Purpose::Geometry);
        assert!(sample_annulus(0, 0.25, 2.0, &mut rng).unwrap().is_empty());
        let n = 1_000_000;
        let r = sample_annulus(n, 0.25, 2.0, &mut rng).unwrap();
        assert!(r.iter().all(|&x| (0.25..=2.0).contains(&x)));
        let p = (1.0f64 - 0.0625) / (4.0 - 0.0625);
        let frac = r.iter().filter(|&&x| x <= 1.0).count() as Real / n as Real;
        assert!((frac - p).abs() < 3.0 * (p * (1.0 - p) / n as Real).sqrt());
        assert!(sample_annulus(1, 2.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn nakagami_gain_moments() {
        let mut rng = RngSpec::new(4).substream(0, Purpose::Fading);
        let n = 1_000_000;
        for m in [0.7, 1.0, 4.0] {
            let g = NakagamiGain::new(m).unwrap();
            let xs: Vec<Real> = (0..n).map(|_| g.sample(&mut rng)).collect();
            let mean = xs.iter().sum::<Real>() / n as Real;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<Real>() / (n - 1) as Real;
            assert!((mean - 1.0).abs() < 3.0 * (1.0 / m / n as Real).sqrt());
            // Var of the sample variance: (μ4 − σ⁴)/n with μ4 = 3/m² + 6/m³ for Gamma(m, 1/m)
            let mu4 = 3.0 / (m * m) + 6.0 / (m * m * m);
            let se = ((mu4 - 1.0 / (m * m)) / n as Real).sqrt();
            assert!((var - 1.0 / m).abs() < 3.0 * se, "m={m} var={var}");
        }
        assert!(NakagamiGain::new(0.0).is_err());
    }

    #[test]
    fn rayleigh_gain_is_exponential() {
        // Kolmogorov–Smirnov against Exp(1); 1% critical value 1.628/√n
        let mut rng = RngSpec::new(5).substream(0, Purpose::Fading);
        let n = 20_000;
        let mut xs: Vec<Real> = (0..n).map(|_| sample_nakagami_gain(1.0, &mut rng).unwrap()).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = 1.0 - (-x).exp();
                (f - i as Real / n as Real).abs().max(((i + 1) as Real / n as Real - f).abs())
            })
            .fold(0.0, Real::max);
        assert!(d < 1.628 / (n as Real).sqrt(), "D = {d}");
    }

    #[test]
    fn indicator_frequencies_match_collision_model() {
        let c = CollisionModel::new(10.0, 0.6, 0.96).unwrap();
        let mut rng = RngSpec::new(6).substream(0, Purpose::Fading);
        let n = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            match sample_indicator(&c, rng.random()) {
                Indicator::CoChannel => counts[0] += 1,
                Indicator::Adjacent => counts[1] += 1,
                Indicator::None => counts[2] += 1,
            }
        }
        for (k, p) in counts.iter().zip([c.p_c, c.p_a, c.p_n]) {
            let f = *k as Real / n as Real;
            assert!((f - p).abs() < 3.0 * (p * (1.0 - p) / n as Real).sqrt());
        }
    }
}
