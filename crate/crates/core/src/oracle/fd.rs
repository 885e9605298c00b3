use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{Family, PotentialSpec};
use crate::oracle::GridSpec;
use crate::oscillator::{OscillatorSpec, SpaceConfig};

type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial eigenproblem in Liouville normal form.
///
/// With `u = ∫ dr/√(1+λr²)` and `χ = r^{(d−1)/2} ψ` the radial equation
/// becomes `−χ'' + Q(u) χ = E χ`,
/// `Q = V + ((l+(d−2)/2)² − 1/4)/r² + λ(d−1)²/4`.
#[derive(Clone)]
pub struct RadialProblem {
    space: SpaceConfig,
    /// `V` as a function of `s = 1+λr²`.
    potential: Potential,
    threshold: Option<f64>,
}

impl std::fmt::Debug for RadialProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProblem")
            .field("space", &self.space)
            .field("threshold", &self.threshold)
            .finish_non_exhaustive()
    }
}

impl RadialProblem {
    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        let (big_a, big_b) = spec.coefficients()?;
        let space = *spec.space();
        let lam = space.lambda();
        let family = spec.family();
        let potential: Potential = Arc::new(move |s: f64| {
            let extra: f64 = big_b
                .iter()
                .enumerate()
                .map(|(k, bk)| match family {
                    Family::First => bk * s.powi(k as i32 + 1),
                    Family::Second => bk * s.powi(-(k as i32) - 2),
                })
                .sum();
            lam * big_a - lam * big_a / s + lam * extra
        });
        let threshold = (lam > 0.0 && family == Family::Second).then(|| continuum_threshold(&space, big_a));
        Ok(Self {
            space,
            potential,
            threshold,
        })
    }

    pub fn from_oscillator(osc: &OscillatorSpec) -> Self {
        let space = *osc.space();
        let lam = space.lambda();
        let big_a = osc.big_a();
        Self {
            space,
            potential: Arc::new(move |s: f64| lam * big_a - lam * big_a / s),
            threshold: (lam > 0.0).then(|| continuum_threshold(&space, big_a)),
        }
    }

    pub fn space(&self) -> &SpaceConfig {
        &self.space
    }

    /// Bottom of the continuum when the potential levels off at infinity.
    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    fn q(&self, u: f64) -> f64 {
        let lam = self.space.lambda();
        let k = lam.abs().sqrt();
        let (r, s) = if lam > 0.0 {
            let t = k * u;
            (t.sinh() / k, t.cosh().powi(2))
        } else {
            let t = k * u;
            (t.sin() / k, t.cos().powi(2))
        };
        let d = self.space.d() as f64;
        let nu = self.space.l() as f64 + 0.5 * (d - 2.0);
        let singular = if self.space.is_one_dimensional() { 0.0 } else { (nu * nu - 0.25) / (r * r) };
        let q = (self.potential)(s) + singular + 0.25 * lam * (d - 1.0).powi(2);
        if q.is_nan() {
            CLAMP
        } else {
            q.clamp(-CLAMP, CLAMP)
        }
    }

    /// Even sector of the line uses a reflecting condition at the origin.
    fn neumann_at_origin(&self) -> bool {
        self.space.is_one_dimensional() && self.space.l() == 0
    }

    fn natural_end(&self) -> Option<f64> {
        let lam = self.space.lambda();
        (lam < 0.0).then(|| std::f64::consts::FRAC_PI_2 / (-lam).sqrt())
    }
}

/// `λ(A + (d−1)²/4)`
pub fn continuum_threshold(space: &SpaceConfig, big_a: f64) -> f64 {
    space.lambda() * (big_a + 0.25 * (space.d() as f64 - 1.0).powi(2))
}

const CLAMP: f64 = 1e200;
const DECAY: f64 = 25.0;
const MAX_LEVELS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdSpectrum {
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues on the requested grid.
    pub fine: Vec<f64>,
    /// Eigenvalues on the grid with half as many intervals.
    pub coarse: Vec<f64>,
    pub intervals: usize,
    /// Outer end of the `u` interval.
    pub u_max: f64,
    pub threshold: Option<f64>,
}

impl FdSpectrum {
    /// Smallest distance from `e` to any eigenvalue, relative to
    /// `max(|e|, |λ|)`; uses the extrapolated or the raw fine values.
    pub fn relative_match(&self, e: f64, lambda: f64, extrapolated: bool) -> f64 {
        let values = if extrapolated { &self.eigenvalues } else { &self.fine };
        let scale = e.abs().max(lambda.abs());
        values.iter().map(|v| (v - e).abs() / scale).fold(f64::INFINITY, f64::min)
    }
}

/// `k` lowest eigenvalues of a complete spec in its own `l` (or parity)
/// sector; the grid supplies the number of points.
pub fn fd_eigensolve(spec: &PotentialSpec, grid: &GridSpec, k: usize) -> Result<FdSpectrum> {
    fd_solve(&RadialProblem::from_spec(spec)?, grid.points() - 1, k)
}

pub fn fd_oscillator(osc: &OscillatorSpec, grid: &GridSpec, k: usize) -> Result<FdSpectrum> {
    fd_solve(&RadialProblem::from_oscillator(osc), grid.points() - 1, k)
}

pub fn fd_solve(problem: &RadialProblem, intervals: usize, k: usize) -> Result<FdSpectrum> {
    if k == 0 || k > MAX_LEVELS {
        return Err(Error::InvalidParameter {
            field: "k",
            reason: format!("between 1 and {MAX_LEVELS} levels, got {k}"),
        });
    }
    if intervals < 200 {
        return Err(Error::InvalidParameter {
            field: "grid_points",
            reason: format!("need at least 200 intervals, got {intervals}"),
        });
    }
    let u_max = outer_end(problem, k);
    let fine = eigenvalues(problem, u_max, intervals, k);
    let coarse = eigenvalues(problem, u_max, intervals / 2, k);
    let lam = problem.space.lambda();
    let bound = problem.threshold.unwrap_or(f64::INFINITY);
    let shift = fine
        .iter()
        .zip(&coarse)
        .filter(|(f, _)| **f < bound)
        .map(|(f, c)| (f - c).abs() / f.abs().max(lam.abs()))
        .fold(0.0, f64::max);
    if shift > 0.05 {
        return Err(Error::FdNonConvergence { shift });
    }
    let ratio = (intervals as f64 / (intervals / 2) as f64).powi(2);
    let eigenvalues = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (ratio * f - c) / (ratio - 1.0))
        .collect();
    Ok(FdSpectrum {
        eigenvalues,
        fine,
        coarse,
        intervals,
        u_max,
        threshold: problem.threshold,
    })
}

/// Observed convergence order of each of the `k` lowest levels from
/// `m`, `2m` and `4m` intervals on a common domain.
pub fn measured_order(problem: &RadialProblem, m: usize, k: usize) -> Vec<f64> {
    let u_max = outer_end(problem, k);
    let e1 = eigenvalues(problem, u_max, m, k);
    let e2 = eigenvalues(problem, u_max, 2 * m, k);
    let e4 = eigenvalues(problem, u_max, 4 * m, k);
    (0..k)
        .map(|i| ((e1[i] - e2[i]) / (e2[i] - e4[i])).abs().log2())
        .collect()
}

/// Where the `u` grid stops: the natural endpoint for `λ < 0`, otherwise
/// far enough into the forbidden region that the `k`-th level has decayed
/// by about `e^{−25}`.
fn outer_end(problem: &RadialProblem, k: usize) -> f64 {
    if let Some(end) = problem.natural_end() {
        return end;
    }
    let scale = problem.space.lambda().sqrt();
    let cap = 40.0 / scale;
    let mut u_max = 10.0 / scale;
    for _ in 0..4 {
        let trial = eigenvalues(problem, u_max, 1000, k);
        let mut e_ref = trial[k - 1];
        if let Some(t) = problem.threshold {
            e_ref = e_ref.min(t - 0.04 * problem.space.lambda());
        }
        let next = cutoff(problem, e_ref, cap);
        let done = (next - u_max).abs() < 0.01 * u_max;
        u_max = next;
        if done {
            break;
        }
    }
    u_max
}

fn cutoff(problem: &RadialProblem, e: f64, cap: f64) -> f64 {
    let steps = 40_000;
    let du = cap / steps as f64;
    let mut acc = 0.0;
    let mut allowed = false;
    for i in 1..=steps {
        let u = i as f64 * du;
        let q = problem.q(u);
        if q > e {
            if allowed {
                acc += (q - e).sqrt() * du;
                if acc >= DECAY {
                    return u;
                }
            }
        } else {
            allowed = true;
            acc = 0.0;
        }
    }
    cap
}

/// Lowest `k` eigenvalues of the second-order central-difference matrix on
/// `(0, u_max)` with `m` intervals and `χ(u_max) = 0`.
fn eigenvalues(problem: &RadialProblem, u_max: f64, m: usize, k: usize) -> Vec<f64> {
    let h = u_max / m as f64;
    let h2 = h * h;
    let neumann = problem.neumann_at_origin();
    let first = if neumann { 0 } else { 1 };
    let diag: Vec<f64> = (first..m).map(|i| 2.0 / h2 + problem.q(i as f64 * h)).collect();
    let mut offsq = vec![1.0 / (h2 * h2); diag.len() - 1];
    if neumann {
        offsq[0] = 2.0 / (h2 * h2);
    }
    lowest_eigenvalues(&diag, &offsq, k)
}

/// Sturm count: number of eigenvalues below `x`.
fn count_below(diag: &[f64], offsq: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut piv = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        piv = a - x - if i > 0 { offsq[i - 1] / piv } else { 0.0 };
        if piv == 0.0 {
            piv = -f64::MIN_POSITIVE.sqrt();
        }
        if piv < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of a symmetric tridiagonal matrix given its
/// diagonal and squared off-diagonal, by bisection.
pub fn lowest_eigenvalues(diag: &[f64], offsq: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    let k = k.min(n);
    let lower = (0..n)
        .map(|i| {
            let left = if i > 0 { offsq[i - 1].sqrt() } else { 0.0 };
            let right = if i + 1 < n { offsq[i].sqrt() } else { 0.0 };
            diag[i] - left - right
        })
        .fold(f64::INFINITY, f64::min);
    (0..k)
        .map(|j| {
            let mut lo = lower;
            let mut step = 1.0_f64.max(lower.abs());
            let mut hi = lo + step;
            while count_below(diag, offsq, hi) <= j {
                lo = hi;
                step *= 2.0;
                hi = lo + step;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) || mid == lo || mid == hi {
                    break;
                }
                if count_below(diag, offsq, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}
