use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, linear_to_db};
use crate::error::{Error, Result};
use crate::numerics::{ln_bessel_i0, MonotoneCubic};
use crate::simkit::rng::{blocks, Purpose, RngSpec};
use crate::Real;

use std::f64::consts::{LN_2, PI};

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub value: Real,
    pub std_err: Real,
}

/// Magnitude of the complex correlation between the two tones over one
/// symbol for tone spacing `h/T`.
pub fn tone_correlation(h: Real) -> Real {
    if h == 0.0 {
        1.0
    } else {
        ((PI * h).sin() / (PI * h)).abs()
    }
}

// One channel use: transmitted tone 1 with unknown phase, noise CN(0, 1) per
// correlator with correlation rho between the correlators.
#[derive(Debug, Clone, Copy)]
struct Draw {
    z1: (Real, Real),
    z2: (Real, Real),
    phase: Real,
}

impl Draw {
    fn sample<R: Rng + ?Sized>(r: &mut R) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut g = || s * r.sample::<Real, _>(StandardNormal);
        let z1 = (g(), g());
        let z2 = (g(), g());
        let phase = 2.0 * PI * r.random::<Real>();
        Self { z1, z2, phase }
    }

    // 1 − log₂(1 + p(y | tone 2) / p(y | tone 1))
    fn information(&self, amp: Real, rho: Real) -> Real {
        let (s, c) = self.phase.sin_cos();
        let t = (1.0 - rho * rho).max(0.0).sqrt();
        let n2 = (rho * self.z1.0 + t * self.z2.0, rho * self.z1.1 + t * self.z2.1);
        let y1 = (amp * c + self.z1.0, amp * s + self.z1.1);
        let y2 = (rho * amp * c + n2.0, rho * amp * s + n2.1);
        let m1 = 2.0 * amp * y1.0.hypot(y1.1);
        let m2 = 2.0 * amp * y2.0.hypot(y2.1);
        let d = ln_bessel_i0(m2) - ln_bessel_i0(m1);
        let log2_1p = if d > 0.0 {
            (d + (-d).exp().ln_1p()) / LN_2
        } else {
            d.exp().ln_1p() / LN_2
        };
        1.0 - log2_1p
    }
}

fn mean_and_err(sum: Real, sum_sq: Real, n: u64) -> RateEstimate {
    let nf = n as Real;
    let mean = sum / nf;
    let var = if n > 1 {
        ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    RateEstimate {
        value: mean,
        std_err: (var / nf).sqrt(),
    }
}

/// Symmetric information rate (bits per symbol) of binary CPFSK with
/// noncoherent two-correlator detection at SNR `snr_linear` (`E_s/N₀`).
pub fn symmetric_rate(snr_linear: Real, h: Real, trials: u64, seed: u64) -> Result<RateEstimate> {
    if !(snr_linear >= 0.0) || !snr_linear.is_finite() {
        return Err(Error::domain("symmetric_rate", format!("snr {snr_linear} must be finite and >= 0")));
    }
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::domain("symmetric_rate", format!("h = {h} must lie in [0, 1]")));
    }
    if trials == 0 {
        return Err(Error::domain("symmetric_rate", "trials must be at least 1"));
    }
    let rng = RngSpec::new(seed);
    let amp = snr_linear.sqrt();
    let rho = tone_correlation(h);
    let parts: Vec<(Real, Real)> = blocks(trials)
        .into_par_iter()
        .map(|b| {
            let mut r = rng.substream(b.index, Purpose::InformationRate);
            (0..b.len).fold((0.0, 0.0), |(s, s2), _| {
                let v = Draw::sample(&mut r).information(amp, rho);
                (s + v, s2 + v * v)
            })
        })
        .collect();
    let (s, s2) = parts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    Ok(mean_and_err(s, s2, trials))
}

/// Grid and sampling settings of a [`RateThresholdTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    /// Modulation indices, strictly increasing within `[0, 1]`.
    pub h_grid: Vec<Real>,
    /// SNR points in dB, strictly increasing.
    pub snr_db_grid: Vec<Real>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            h_grid: (0..=20).map(|i| i as Real * 0.05).collect(),
            snr_db_grid: (0..=60).map(|i| -10.0 + 0.5 * i as Real).collect(),
            trials: 100_000,
            seed: 2024,
        }
    }
}

impl TableSpec {
    pub fn validate(&self) -> Result<()> {
        let increasing = |v: &[Real]| v.len() >= 2 && v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&self.h_grid) || self.h_grid[0] < 0.0 || *self.h_grid.last().unwrap() > 1.0 {
            return Err(Error::config("h_grid", "need at least two increasing values in [0, 1]"));
        }
        if !increasing(&self.snr_db_grid) || self.snr_db_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("snr_db_grid", "need at least two increasing finite values"));
        }
        if self.trials < 2 {
            return Err(Error::config("trials", "need at least 2 trials per grid point"));
        }
        Ok(())
    }
}

pub const TABLE_FORMAT: &str = "fhaci-rate-table";
pub const TABLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TableFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    spec: TableSpec,
    /// `rate[i][j]` at `h_grid[i]`, `snr_db_grid[j]`, after smoothing.
    rate: Vec<Vec<Real>>,
    std_err: Vec<Vec<Real>>,
}

/// Tabulated symmetric information rate `C(γ; h)` and its inverse.
///
/// Every grid point is estimated from the same noise draws, so the table is
/// smooth in both `h` and SNR; each row is then made non-decreasing in SNR
/// by isotonic regression.
#[derive(Debug, Clone)]
pub struct RateThresholdTable {
    file: TableFile,
    // one interpolant across h per SNR column
    columns: Vec<MonotoneCubic<Real>>,
}

impl PartialEq for RateThresholdTable {
    fn eq(&self, other: &Self) -> bool {
        self.file == other.file
    }
}

/// Pool-adjacent-violators fit of a non-decreasing sequence.
pub fn isotonic(values: &[Real]) -> Vec<Real> {
    let mut blocks: Vec<(Real, usize)> = Vec::new();
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.pop();
            let n = na + nb;
            *blocks.last_mut().unwrap() = ((a * na as Real + b * nb as Real) / n as Real, n);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat_n(v, n))
        .collect()
}

impl RateThresholdTable {
    /// Estimates every grid point.
    pub fn build(spec: &TableSpec) -> Result<Self> {
        spec.validate()?;
        let (nh, ns) = (spec.h_grid.len(), spec.snr_db_grid.len());
        let rhos: Vec<Real> = spec.h_grid.iter().map(|&h| tone_correlation(h)).collect();
        let amps: Vec<Real> = spec.snr_db_grid.iter().map(|&s| db_to_linear(s).sqrt()).collect();
        let rng = RngSpec::new(spec.seed);
        let zero = || vec![(0.0, 0.0); nh * ns];
        let sums = blocks(spec.trials)
            .into_par_iter()
            .map(|b| {
                let mut r = rng.substream(b.index, Purpose::InformationRate);
                let mut acc = zero();
                for _ in 0..b.len {
                    let d = Draw::sample(&mut r);
                    for (i, &rho) in rhos.iter().enumerate() {
                        if rho == 1.0 {
                            continue;
                        }
                        for (j, &amp) in amps.iter().enumerate() {
                            let v = d.information(amp, rho);
                            let cell = &mut acc[i * ns + j];
                            cell.0 += v;
                            cell.1 += v * v;
                        }
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(zero(), |mut tot, part| {
                for (t, p) in tot.iter_mut().zip(part) {
                    t.0 += p.0;
                    t.1 += p.1;
                }
                tot
            });
        let mut rate = vec![vec![0.0; ns]; nh];
        let mut std_err = vec![vec![0.0; ns]; nh];
        for i in 0..nh {
            if rhos[i] == 1.0 {
                // identical tones carry no information
                continue;
            }
            let raw: Vec<RateEstimate> = (0..ns)
                .map(|j| mean_and_err(sums[i * ns + j].0, sums[i * ns + j].1, spec.trials))
                .collect();
            for j in 1..ns {
                let drop = raw[j - 1].value - raw[j].value;
                if drop > 5.0 * (raw[j - 1].std_err + raw[j].std_err) + 1e-9 {
                    return Err(Error::numeric(
                        "RateThresholdTable::build",
                        format!(
                            "rate at h = {} falls by {drop} between {} and {} dB",
                            spec.h_grid[i], spec.snr_db_grid[j - 1], spec.snr_db_grid[j]
                        ),
                    ));
                }
            }
            let values: Vec<Real> = raw.iter().map(|e| e.value.clamp(0.0, 1.0)).collect();
            rate[i] = isotonic(&values);
            std_err[i] = raw.iter().map(|e| e.std_err).collect();
        }
        Self::from_file(TableFile {
            format: TABLE_FORMAT.into(),
            version: TABLE_VERSION,
            spec: spec.clone(),
            rate,
            std_err,
        })
    }

    fn from_file(file: TableFile) -> Result<Self> {
        if file.format != TABLE_FORMAT || file.version != TABLE_VERSION {
            return Err(Error::config(
                "format",
                format!("expected {TABLE_FORMAT} v{TABLE_VERSION}, got {} v{}", file.format, file.version),
            ));
        }
        file.spec.validate()?;
        let (nh, ns) = (file.spec.h_grid.len(), file.spec.snr_db_grid.len());
        let shape_ok = |t: &Vec<Vec<Real>>| t.len() == nh && t.iter().all(|r| r.len() == ns);
        if !shape_ok(&file.rate) || !shape_ok(&file.std_err) {
            return Err(Error::config("rate", format!("table must be {nh} x {ns}")));
        }
        if file.rate.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::config("rate", "rates must lie in [0, 1]"));
        }
        if file.rate.iter().any(|row| row.windows(2).any(|w| w[1] < w[0])) {
            return Err(Error::config("rate", "rates must be non-decreasing in SNR"));
        }
        let columns = (0..ns)
            .map(|j| MonotoneCubic::new(file.spec.h_grid.clone(), file.rate.iter().map(|r| r[j]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { file, columns })
    }

    pub fn spec(&self) -> &TableSpec {
        &self.file.spec
    }

    /// Smoothed rates, `[h index][snr index]`.
    pub fn rates(&self) -> &[Vec<Real>] {
        &self.file.rate
    }

    pub fn std_errs(&self) -> &[Vec<Real>] {
        &self.file.std_err
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.file).map_err(|e| Error::config("table", e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_file(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    fn check_h(&self, h: Real) -> Result<()> {
        let g = &self.file.spec.h_grid;
        if !(h >= g[0] && h <= g[g.len() - 1]) {
            return Err(Error::domain(
                "sinr_threshold",
                format!("h = {h} outside table range [{}, {}]", g[0], g[g.len() - 1]),
            ));
        }
        Ok(())
    }

    /// Rate curve over the SNR grid at `h`.
    fn row(&self, h: Real) -> Result<MonotoneCubic<Real>> {
        self.check_h(h)?;
        let mut ys: Vec<Real> = self.columns.iter().map(|c| c.eval(h).clamp(0.0, 1.0)).collect();
        for j in 1..ys.len() {
            ys[j] = ys[j].max(ys[j - 1]);
        }
        MonotoneCubic::new(self.file.spec.snr_db_grid.clone(), ys)
    }

    /// Interpolated `C` at `(h, snr_db)`; the SNR must lie inside the grid.
    pub fn rate(&self, h: Real, snr_db: Real) -> Result<Real> {
        let g = &self.file.spec.snr_db_grid;
        if !(snr_db >= g[0] && snr_db <= g[g.len() - 1]) {
            return Err(Error::domain("rate", format!("snr {snr_db} dB outside table grid")));
        }
        Ok(self.row(h)?.eval(snr_db))
    }

    /// Rates reached at the lowest and highest tabulated SNR for `h`.
    pub fn rate_range(&self, h: Real) -> Result<(Real, Real)> {
        let row = self.row(h)?;
        let ys = row.ys();
        Ok((ys[0], ys[ys.len() - 1]))
    }

    /// Whether `R` can be inverted at `h` within the tabulated SNR range.
    pub fn achievable(&self, rate: Real, h: Real) -> bool {
        matches!(self.rate_range(h), Ok((lo, hi)) if rate > lo && rate <= hi)
    }

    /// SINR threshold `β = C⁻¹(R)` at `h`, in dB.
    pub fn threshold_db(&self, rate: Real, h: Real) -> Result<Real> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::domain("sinr_threshold", format!("R = {rate} must lie in (0, 1)")));
        }
        let row = self.row(h)?;
        let ys = row.ys();
        if !(rate > ys[0] && rate <= ys[ys.len() - 1]) {
            return Err(Error::domain(
                "sinr_threshold",
                format!("R = {rate} not achievable at h = {h}: tabulated range ({}, {}]", ys[0], ys[ys.len() - 1]),
            ));
        }
        row.inverse(rate)
    }
}

/// `β = C⁻¹(R)` at `h`, linear.
pub fn sinr_threshold(rate: Real, h: Real, table: &RateThresholdTable) -> Result<Real> {
    Ok(db_to_linear(table.threshold_db(rate, h)?))
}

/// `β` in dB from a linear value; convenience for reports.
pub fn threshold_to_db(beta: Real) -> Real {
    linear_to_db(beta)
}
