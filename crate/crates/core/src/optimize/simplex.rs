//! Downhill simplex (Nelder–Mead) minimization over a box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Settings of [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions<F, const N: usize> {
    /// Offset of corner `k + 1` from the first corner along axis `k`; also
    /// the per-axis scale of the diameter test.
    pub steps: [F; N],
    pub lower: [F; N],
    pub upper: [F; N],
    /// Stop when every corner lies within this many steps of every other.
    pub diameter_tol: F,
    /// Stop when `C_worst − C_best ≤ cost_tol · |C_best|`.
    pub cost_tol: F,
    pub max_iterations: usize,
    /// Restart once when the simplex shape collapses below this fraction of
    /// its initial regularity.
    pub degenerate_volume: F,
}

impl<F: Scalar, const N: usize> SimplexOptions<F, N> {
    pub fn new(steps: [F; N], lower: [F; N], upper: [F; N]) -> Self {
        Self {
            steps,
            lower,
            upper,
            diameter_tol: F::lit(1e-3),
            cost_tol: F::lit(1e-6),
            max_iterations: 500,
            degenerate_volume: F::lit(1e-12),
        }
    }

    fn validate(&self) -> Result<()> {
        for k in 0..N {
            if !(self.steps[k] > F::zero()) || !(self.lower[k] <= self.upper[k]) {
                return Err(Error::domain("nelder_mead", format!("bad step or bounds on axis {k}")));
            }
        }
        if N == 0 {
            return Err(Error::domain("nelder_mead", "need at least one free coordinate"));
        }
        Ok(())
    }

    fn inside(&self, x: &[F; N]) -> bool {
        (0..N).all(|k| x[k] >= self.lower[k] && x[k] <= self.upper[k])
    }
}

/// Why the search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Diameter,
    CostSpread,
    MaxIterations,
}

/// Result of [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome<F, const N: usize> {
    pub best: [F; N],
    pub cost: F,
    /// Objective calls (out-of-bounds points are not evaluated).
    pub evaluations: usize,
    /// Objective calls that returned an error; such points cost `+∞`.
    pub failures: usize,
    pub iterations: usize,
    /// Best corner after each iteration, starting with the initial simplex.
    pub trace: Vec<([F; N], F)>,
    pub restarted: bool,
    pub termination: Termination,
}

struct Counter<C> {
    cost: C,
    evaluations: usize,
    failures: usize,
}

impl<C> Counter<C> {
    fn eval<F: Scalar, const N: usize>(&mut self, opts: &SimplexOptions<F, N>, x: &[F; N]) -> F
    where
        C: FnMut(&[F; N]) -> Result<F>,
    {
        if !opts.inside(x) {
            return F::infinity();
        }
        self.evaluations += 1;
        match (self.cost)(x) {
            Ok(v) if !v.is_nan() => v,
            _ => {
                self.failures += 1;
                F::infinity()
            }
        }
    }
}

fn initial<F: Scalar, const N: usize>(origin: &[F; N], steps: &[F; N]) -> Vec<[F; N]> {
    let mut corners = vec![*origin];
    for k in 0..N {
        let mut c = *origin;
        c[k] = c[k] + steps[k];
        corners.push(c);
    }
    corners
}

// |det| of the edge matrix in step units, divided by diameter^N: a
// scale-free measure of how flat the simplex is.
fn regularity<F: Scalar, const N: usize>(corners: &[[F; N]], steps: &[F; N]) -> F {
    let mut m: Vec<Vec<F>> = (1..=N)
        .map(|i| (0..N).map(|k| (corners[i][k] - corners[0][k]) / steps[k]).collect())
        .collect();
    let mut det = F::one();
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).expect("finite"))
            .expect("non-empty");
        if m[pivot][col] == F::zero() {
            return F::zero();
        }
        m.swap(col, pivot);
        det = det * m[col][col];
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                let v = m[col][k];
                m[row][k] = m[row][k] - f * v;
            }
        }
    }
    let d = diameter(corners, steps);
    if d == F::zero() {
        return F::zero();
    }
    det.abs() / d.powi(N as i32)
}

fn diameter<F: Scalar, const N: usize>(corners: &[[F; N]], steps: &[F; N]) -> F {
    let mut d = F::zero();
    for a in 0..corners.len() {
        for b in a + 1..corners.len() {
            for k in 0..N {
                d = d.max((corners[a][k] - corners[b][k]).abs() / steps[k]);
            }
        }
    }
    d
}

fn sort<F: Scalar, const N: usize>(corners: &mut [[F; N]], costs: &mut [F]) {
    let mut idx: Vec<usize> = (0..costs.len()).collect();
    idx.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap_or(std::cmp::Ordering::Equal));
    let c: Vec<[F; N]> = idx.iter().map(|&i| corners[i]).collect();
    let v: Vec<F> = idx.iter().map(|&i| costs[i]).collect();
    corners.copy_from_slice(&c);
    costs.copy_from_slice(&v);
}

fn lerp<F: Scalar, const N: usize>(from: &[F; N], to: &[F; N], t: F) -> [F; N] {
    let mut out = *from;
    for k in 0..N {
        out[k] = from[k] + t * (to[k] - from[k]);
    }
    out
}

/// Minimizes `cost` starting from the simplex with first corner `init` and
/// the others offset by `opts.steps`.
///
/// Each iteration reflects the worst corner through the centroid `c` of the
/// others, `x_r = 2c − x_w`, and then
/// - accepts `x_r` if it is neither best nor worst-but-one,
/// - tries the expansion `c + 2(x_r − c)` if `x_r` is the new best,
/// - contracts halfway from `c` toward the better of `x_w`, `x_r` if `x_r`
///   is at least as bad as the worst-but-one, and
/// - otherwise halves every edge toward the best corner.
pub fn minimize<F, C, const N: usize>(
    cost: C,
    init: [F; N],
    opts: &SimplexOptions<F, N>,
) -> Result<SimplexOutcome<F, N>>
where
    F: Scalar,
    C: FnMut(&[F; N]) -> Result<F>,
{
    opts.validate()?;
    let mut counter = Counter {
        cost,
        evaluations: 0,
        failures: 0,
    };
    let mut corners = initial(&init, &opts.steps);
    let mut costs: Vec<F> = corners.iter().map(|c| counter.eval(opts, c)).collect();
    if costs.iter().all(|c| c.is_infinite()) {
        return Err(Error::numeric(
            "nelder_mead",
            "objective failed or was out of bounds at every initial corner",
        ));
    }
    sort(&mut corners, &mut costs);
    let reference = regularity(&corners, &opts.steps);
    let mut trace = vec![(corners[0], costs[0])];
    let mut restarted = false;
    let two = F::lit(2.0);
    let half = F::lit(0.5);
    let mut iterations = 0;
    let termination = loop {
        if diameter(&corners, &opts.steps) < opts.diameter_tol {
            break Termination::Diameter;
        }
        let spread = costs[N] - costs[0];
        if spread.is_finite() && spread <= opts.cost_tol * costs[0].abs() {
            break Termination::CostSpread;
        }
        if iterations >= opts.max_iterations {
            break Termination::MaxIterations;
        }
        iterations += 1;

        let mut centroid = [F::zero(); N];
        for c in &corners[..N] {
            for k in 0..N {
                centroid[k] = centroid[k] + c[k] / F::count(N);
            }
        }
        let worst = corners[N];
        let reflected = lerp(&centroid, &worst, -F::one());
        let c_r = counter.eval(opts, &reflected);
        if c_r >= costs[0] && c_r < costs[N - 1] {
            corners[N] = reflected;
            costs[N] = c_r;
        } else if c_r < costs[0] {
            let expanded = lerp(&centroid, &reflected, two);
            let c_s = counter.eval(opts, &expanded);
            if c_s < c_r {
                corners[N] = expanded;
                costs[N] = c_s;
            } else {
                corners[N] = reflected;
                costs[N] = c_r;
            }
        } else {
            let (base, c_b) = if c_r < costs[N] { (reflected, c_r) } else { (worst, costs[N]) };
            let contracted = lerp(&centroid, &base, half);
            let c_c = counter.eval(opts, &contracted);
            if c_c < c_b {
                corners[N] = contracted;
                costs[N] = c_c;
            } else {
                let best = corners[0];
                for i in 1..=N {
                    corners[i] = lerp(&best, &corners[i], half);
                    costs[i] = counter.eval(opts, &corners[i]);
                }
            }
        }
        sort(&mut corners, &mut costs);
        trace.push((corners[0], costs[0]));

        if !restarted && regularity(&corners, &opts.steps) < opts.degenerate_volume * reference {
            restarted = true;
            let mut small = opts.steps;
            for s in &mut small {
                *s = *s * F::lit(0.1);
            }
            let best = (corners[0], costs[0]);
            corners = initial(&best.0, &small);
            costs[0] = best.1;
            for i in 1..=N {
                costs[i] = counter.eval(opts, &corners[i]);
            }
            sort(&mut corners, &mut costs);
        }
    };
    Ok(SimplexOutcome {
        best: corners[0],
        cost: costs[0],
        evaluations: counter.evaluations,
        failures: counter.failures,
        iterations,
        trace,
        restarted,
        termination,
    })
}
