//! Maximization of `τ′(θ)` over `θ = (L, R, h, ψ)`.
//!
//! [`grid_search`] scans a discretized parameter space exhaustively;
//! [`nelder_mead`] runs the downhill simplex on the cost `C(θ) = −τ′(θ)`
//! with `L` treated as real. [`profile_curve`] and [`psi_vs_distance`] build
//! the sweeps used for plotting on top of these.

mod grid;
mod objective;
mod profile;
pub mod simplex;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use grid::{grid_search, SearchSpace};
pub use objective::{Evaluation, MctcObjective, Objective, SplatterModel};
pub use profile::{profile_curve, psi_vs_distance, DistancePoint, ProfilePoint};
pub use simplex::{SimplexOptions, SimplexOutcome, Termination};

use crate::channel::WaveformParams;
use crate::error::{Error, Result};
use crate::Real;

/// One coordinate of `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coordinate {
    #[serde(rename = "L")]
    Channels,
    #[serde(rename = "R")]
    Rate,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "psi")]
    Psi,
}

impl Coordinate {
    pub const ALL: [Coordinate; 4] = [Coordinate::Channels, Coordinate::Rate, Coordinate::H, Coordinate::Psi];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["L", "R", "h", "psi"][self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Grid,
    NelderMead,
}

/// A visited state and its capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub theta: WaveformParams,
    pub tau: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Optimum with `L` rounded half-up.
    pub theta_opt: WaveformParams,
    /// `τ′` re-evaluated at `theta_opt`.
    pub tau_opt: Real,
    pub evaluations: usize,
    /// Evaluations whose objective returned an error.
    pub failures: usize,
    /// Successive best states: accepted best corners for Nelder–Mead,
    /// running maxima in scan order for the grid.
    pub trace: Vec<TracePoint>,
    pub method: Method,
    pub termination: Option<Termination>,
    pub restarted: bool,
}

impl OptimizationResult {
    /// Trace as CSV text: `step,L,R,h,psi,tau`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("step,L,R,h,psi,tau\n");
        for (i, p) in self.trace.iter().enumerate() {
            let t = &p.theta;
            writeln!(out, "{i},{},{},{},{},{}", t.channels, t.rate, t.h, t.psi, p.tau).expect("write to string");
        }
        out
    }
}

/// Settings of [`nelder_mead`]; defaults follow the usual search over
/// `(L, R, h, ψ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadOptions {
    pub steps: [Real; 4],
    pub lower: [Real; 4],
    pub upper: [Real; 4],
    pub diameter_tol: Real,
    pub cost_tol: Real,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            steps: [1.0, 0.025, 0.025, 0.005],
            lower: [1.0, 0.01, 0.01, 0.90],
            upper: [400.0, 0.99, 0.999, 0.999],
            diameter_tol: 1e-3,
            cost_tol: 1e-6,
            max_iterations: 500,
        }
    }
}

impl NelderMeadOptions {
    /// First corner of the default starting simplex.
    pub fn default_start() -> WaveformParams {
        WaveformParams::from_array([20.0, 0.5, 0.5, 0.975])
    }

    fn reduced<const N: usize>(&self, free: &[usize; N]) -> SimplexOptions<Real, N> {
        let pick = |a: &[Real; 4]| free.map(|k| a[k]);
        let mut o = SimplexOptions::new(pick(&self.steps), pick(&self.lower), pick(&self.upper));
        o.diameter_tol = self.diameter_tol;
        o.cost_tol = self.cost_tol;
        o.max_iterations = self.max_iterations;
        o
    }
}

fn finish<O: Objective + ?Sized, const N: usize>(
    objective: &O,
    out: SimplexOutcome<Real, N>,
    embed: impl Fn(&[Real; N]) -> WaveformParams,
) -> Result<OptimizationResult> {
    let theta_opt = embed(&out.best).with_rounded_channels();
    let tau_opt = objective.tau(&theta_opt)?;
    Ok(OptimizationResult {
        theta_opt,
        tau_opt,
        evaluations: out.evaluations + 1,
        failures: out.failures,
        trace: out
            .trace
            .iter()
            .map(|(x, c)| TracePoint {
                theta: embed(x),
                tau: -c,
            })
            .collect(),
        method: Method::NelderMead,
        termination: Some(out.termination),
        restarted: out.restarted,
    })
}

/// Maximizes `τ′` over all four coordinates from the simplex whose first
/// corner is `init`.
pub fn nelder_mead<O: Objective + ?Sized>(
    objective: &O,
    init: &WaveformParams,
    opts: &NelderMeadOptions,
) -> Result<OptimizationResult> {
    let simplex = opts.reduced(&[0, 1, 2, 3]);
    let out = simplex::minimize(
        |x: &[Real; 4]| Ok(-objective.tau(&WaveformParams::from_array(*x))?),
        init.as_array(),
        &simplex,
    )?;
    finish(objective, out, |x| WaveformParams::from_array(*x))
}

/// Maximizes `τ′` over the three coordinates other than `fixed`, which is
/// held at `value`.
pub fn nelder_mead_fixed<O: Objective + ?Sized>(
    objective: &O,
    init: &WaveformParams,
    fixed: Coordinate,
    value: Real,
    opts: &NelderMeadOptions,
) -> Result<OptimizationResult> {
    if !value.is_finite() {
        return Err(Error::domain("nelder_mead_fixed", format!("{} = {value}", fixed.name())));
    }
    let f = fixed.index();
    let free: [usize; 3] = {
        let mut it = (0..4).filter(|&k| k != f);
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    };
    let embed = |x: &[Real; 3]| {
        let mut a = [0.0; 4];
        a[f] = value;
        for (slot, &k) in free.iter().enumerate() {
            a[k] = x[slot];
        }
        WaveformParams::from_array(a)
    };
    let start = init.as_array();
    let out = simplex::minimize(
        |x: &[Real; 3]| Ok(-objective.tau(&embed(x))?),
        free.map(|k| start[k]),
        &opts.reduced(&free),
    )?;
    finish(objective, out, embed)
}
