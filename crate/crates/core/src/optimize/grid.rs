use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Method, Objective, OptimizationResult, TracePoint};
use crate::channel::WaveformParams;
use crate::error::{Error, Result};
use crate::Real;

/// Candidate values of each coordinate for [`grid_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    #[serde(rename = "L")]
    pub channels: Vec<Real>,
    #[serde(rename = "R")]
    pub rates: Vec<Real>,
    pub h: Vec<Real>,
    pub psi: Vec<Real>,
}

fn steps(first: Real, step: Real, count: usize) -> Vec<Real> {
    // rounded to the step's decimals so grid values print cleanly
    (0..count)
        .map(|i| ((first + step * i as Real) * 1e6).round() / 1e6)
        .collect()
}

impl SearchSpace {
    /// Integer `L ∈ [1, 200]`, `R ∈ (0, 1)` and `h ∈ (0, 1]` in steps of
    /// 0.01, `ψ ∈ [0.90, 0.995]` in steps of 0.005 plus 0.999.
    pub fn full() -> Self {
        let mut psi = steps(0.90, 0.005, 20);
        psi.push(0.999);
        Self {
            channels: steps(1.0, 1.0, 200),
            rates: steps(0.01, 0.01, 99),
            h: steps(0.01, 0.01, 100),
            psi,
        }
    }

    /// Evenly spaced values `first, first + step, …` (`count` of them).
    pub fn range(first: Real, step: Real, count: usize) -> Vec<Real> {
        steps(first, step, count)
    }

    pub fn len(&self) -> usize {
        self.channels.len() * self.rates.len() * self.h.len() * self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("L", &self.channels), ("R", &self.rates), ("h", &self.h), ("psi", &self.psi)] {
            if v.is_empty() {
                return Err(Error::config(name, "grid must not be empty"));
            }
            if v.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::config(name, "grid values must be strictly increasing"));
            }
        }
        Ok(())
    }

    /// Point number `i` in lexicographic `(L, R, h, ψ)` order.
    pub fn point(&self, i: usize) -> WaveformParams {
        let np = self.psi.len();
        let nh = self.h.len();
        let nr = self.rates.len();
        WaveformParams {
            channels: self.channels[i / (np * nh * nr)],
            rate: self.rates[(i / (np * nh)) % nr],
            h: self.h[(i / np) % nh],
            psi: self.psi[i % np],
        }
    }
}

const CHUNK: usize = 1 << 14;

struct ChunkScan {
    // running maxima within the chunk, in scan order
    improvements: Vec<(usize, Real)>,
    failures: usize,
    first_error: Option<Error>,
}

/// Exhaustive maximization of `τ′` over `space`. Ties go to the smallest
/// `L`, then `R`, then `h`, then `ψ`. Points whose evaluation fails are
/// skipped; more than 1% failures is an error.
pub fn grid_search<O: Objective + ?Sized>(objective: &O, space: &SearchSpace) -> Result<OptimizationResult> {
    space.validate()?;
    let n = space.len();
    let chunks: Vec<ChunkScan> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let values: Vec<Result<Real>> = (start..(start + CHUNK).min(n))
                .into_par_iter()
                .map(|i| objective.tau(&space.point(i)))
                .collect();
            let mut scan = ChunkScan {
                improvements: Vec::new(),
                failures: 0,
                first_error: None,
            };
            for (off, v) in values.into_iter().enumerate() {
                match v {
                    Ok(t) if t.is_finite() => {
                        if scan.improvements.last().is_none_or(|&(_, best)| t > best) {
                            scan.improvements.push((start + off, t));
                        }
                    }
                    Ok(t) => {
                        scan.failures += 1;
                        scan.first_error.get_or_insert(Error::numeric("grid_search", format!("objective returned {t}")));
                    }
                    Err(e) => {
                        scan.failures += 1;
                        scan.first_error.get_or_insert(e);
                    }
                }
            }
            scan
        })
        .collect();

    let failures: usize = chunks.iter().map(|c| c.failures).sum();
    if failures * 100 > n {
        let first = chunks.iter().find_map(|c| c.first_error.clone());
        return Err(Error::numeric(
            "grid_search",
            format!("{failures} of {n} grid points failed; first: {}", first.map_or(String::new(), |e| e.to_string())),
        ));
    }
    let mut trace: Vec<TracePoint> = Vec::new();
    for c in &chunks {
        for &(i, t) in &c.improvements {
            if trace.last().is_none_or(|b| t > b.tau) {
                trace.push(TracePoint {
                    theta: space.point(i),
                    tau: t,
                });
            }
        }
    }
    let best = *trace
        .last()
        .ok_or_else(|| Error::numeric("grid_search", "no grid point could be evaluated"))?;
    Ok(OptimizationResult {
        theta_opt: best.theta,
        tau_opt: best.tau,
        evaluations: n,
        failures,
        trace,
        method: Method::Grid,
        termination: None,
        restarted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SearchSpace {
        SearchSpace {
            channels: vec![10.0, 20.0, 30.0],
            rates: vec![0.4, 0.5, 0.6],
            h: vec![0.6, 0.7, 0.8],
            psi: vec![0.95, 0.96, 0.97],
        }
    }

    #[test]
    fn finds_vertex_of_separable_concave_objective() {
        let f = |wf: &WaveformParams| -> Result<Real> {
            Ok(-(wf.channels - 20.0).powi(2) - (wf.rate - 0.6).powi(2) - (wf.h - 0.7).powi(2) - (wf.psi - 0.96).powi(2))
        };
        let r = grid_search(&f, &small()).unwrap();
        assert_eq!(r.theta_opt.as_array(), [20.0, 0.6, 0.7, 0.96]);
        assert_eq!(r.evaluations, 81);
        assert_eq!(r.method, Method::Grid);
    }

    #[test]
    fn matches_direct_scan_and_breaks_ties_lexicographically() {
        let f = |wf: &WaveformParams| -> Result<Real> { Ok(((wf.channels * wf.rate * 10.0).round() % 7.0) * wf.h.min(0.7)) };
        let space = small();
        let r = grid_search(&f, &space).unwrap();
        let mut best = (usize::MAX, Real::NEG_INFINITY);
        for i in 0..space.len() {
            let v = f(&space.point(i)).unwrap();
            if v > best.1 {
                best = (i, v);
            }
        }
        assert_eq!(r.theta_opt, space.point(best.0));
        assert_eq!(r.tau_opt, best.1);
        assert!(r.trace.windows(2).all(|w| w[1].tau > w[0].tau));
    }

    #[test]
    fn failure_budget() {
        let space = small();
        let bad_one = |wf: &WaveformParams| -> Result<Real> {
            if wf.channels == 10.0 && wf.rate == 0.4 && wf.h == 0.6 && wf.psi == 0.95 {
                Err(Error::numeric("test", "boom"))
            } else {
                Ok(wf.rate)
            }
        };
        // 1 of 81 is above 1%
        assert!(grid_search(&bad_one, &space).is_err());
        let mut big = space.clone();
        big.channels = SearchSpace::range(1.0, 1.0, 10);
        let r = grid_search(&bad_one, &big).unwrap();
        assert_eq!(r.failures, 1);
    }

    #[test]
    fn full_space_shape() {
        let s = SearchSpace::full();
        s.validate().unwrap();
        assert_eq!(s.channels.len(), 200);
        assert_eq!(*s.rates.last().unwrap(), 0.99);
        assert_eq!(*s.h.last().unwrap(), 1.0);
        assert_eq!(s.point(0).as_array(), [1.0, 0.01, 0.01, 0.9]);
        assert_eq!(s.point(s.len() - 1).as_array(), [200.0, 0.99, 1.0, 0.999]);
        assert!(SearchSpace { psi: vec![], ..small() }.validate().is_err());
    }
}
