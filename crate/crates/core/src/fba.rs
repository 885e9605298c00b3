//! Functional Bethe ansatz for `P φ'' + Q φ' + W φ = 0` with
//! `deg P ≤ 5`, `deg Q ≤ 4`, `deg W ≤ 3`.
//!
//! A monic polynomial `φ(z) = ∏ (z − z_i)` with distinct roots solves the
//! equation for some cubic `W` exactly when every root satisfies
//!
//! ```text
//! Σ_{j≠i} 2/(z_i − z_j) + Q(z_i)/P(z_i) = 0,
//! ```
//!
//! and `W` is then fixed by symmetric functions of the roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Relative distinctness tolerance for roots.
pub const DISTINCT_TOL: f64 = 1e-8;
/// Relative tolerance for a root sitting on a zero of `P`.
pub const POLE_TOL: f64 = 1e-10;
/// Gate on the scaled Bethe residuals of an accepted configuration.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Gate on [`verify_polynomial_solution`].
pub const ODE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheProblem {
    p: [f64; 6],
    q: [f64; 5],
    n: usize,
}

impl BetheProblem {
    pub fn new(p: [f64; 6], q: [f64; 5], n: usize) -> Result<Self> {
        if p[2..].iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidProblem(
                "p2..p5 all vanish; the equation is not second order".into(),
            ));
        }
        if p.iter().chain(q.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidProblem("non-finite coefficient".into()));
        }
        Ok(Self { p, q, n })
    }

    pub fn p(&self) -> &[f64; 6] {
        &self.p
    }

    pub fn q(&self) -> &[f64; 5] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_degree(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    /// Same Bethe equations with a common factor `z^k` of `P` and `Q`
    /// divided out; the roots avoid `z = 0` either way.
    fn without_common_monomial(&self) -> Self {
        let lead = |c: &[f64]| c.iter().position(|&x| x != 0.0).unwrap_or(c.len());
        let k = lead(&self.p).min(lead(&self.q));
        let mut p = [0.0; 6];
        let mut q = [0.0; 5];
        p[..6 - k].copy_from_slice(&self.p[k..]);
        q[..5 - k.min(5)].copy_from_slice(&self.q[k.min(5)..]);
        Self { p, q, n: self.n }
    }

    fn magnitude_p(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.p
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * r.powi(k as i32))
            .sum()
    }

    fn magnitude_q(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.q
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * r.powi(k as i32))
            .sum()
    }
}

/// A root configuration, stored in canonical order (ascending real part, then
/// imaginary part).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRoots {
    roots: Vec<Complex64>,
}

impl BetheRoots {
    pub fn new(mut roots: Vec<Complex64>) -> Self {
        roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        Self { roots }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn empty() -> Self {
        Self { roots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn is_real(&self) -> bool {
        self.roots.iter().all(|z| z.im == 0.0)
    }

    /// Real values when every root is real.
    pub fn to_real(&self) -> Option<Vec<f64>> {
        self.is_real()
            .then(|| self.roots.iter().map(|z| z.re).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.roots.iter().map(|z| z.conj()).collect())
    }

    pub fn power_sum(&self, k: i32) -> Complex64 {
        self.roots.iter().map(|z| z.powi(k)).sum()
    }

    /// `Σ_{i<j} z_i z_j`
    pub fn pair_sum(&self) -> Complex64 {
        let mut s = ZERO;
        for (i, zi) in self.roots.iter().enumerate() {
            for zj in &self.roots[i + 1..] {
                s += zi * zj;
            }
        }
        s
    }

    /// `Σ_{i≠j} z_i² z_j`
    pub fn cross_sum(&self) -> Complex64 {
        let mut s = ZERO;
        for (i, zi) in self.roots.iter().enumerate() {
            for (j, zj) in self.roots.iter().enumerate() {
                if i != j {
                    s += zi * zi * zj;
                }
            }
        }
        s
    }

    /// Monic coefficients of `∏ (z − z_i)`, lowest degree first.
    pub fn polynomial(&self) -> Vec<Complex64> {
        poly::from_roots(&self.roots)
    }

    fn scale(&self) -> f64 {
        1.0 + self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_distinct(&self) -> Result<()> {
        let tol = DISTINCT_TOL * self.scale();
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                if (self.roots[i] - self.roots[j]).norm() <= tol {
                    return Err(Error::DuplicateRoots { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_poles(&self, prob: &BetheProblem) -> Result<()> {
        for (index, &z) in self.roots.iter().enumerate() {
            let pz = poly::eval_complex(&prob.p, z).norm();
            if pz <= POLE_TOL * prob.magnitude_p(z) {
                return Err(Error::PoleProximity { index, value: z.re });
            }
        }
        Ok(())
    }

    /// Checks the distinctness and pole-avoidance invariants against `prob`.
    pub fn validate(&self, prob: &BetheProblem) -> Result<()> {
        if self.roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidProblem("non-finite root".into()));
        }
        self.check_distinct()?;
        self.check_poles(prob)
    }
}

/// Coefficients `w_0..w_3` of `W(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WCoefficients {
    pub w: [Complex64; 4],
}

impl WCoefficients {
    /// Real parts; exact for real root sets, and for conjugation-closed sets
    /// up to rounding.
    pub fn re(&self) -> [f64; 4] {
        self.w.map(|x| x.re)
    }

    pub fn max_imag(&self) -> f64 {
        self.w.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
    }
}

/// Left-hand side of the `i`-th Bethe equation (0-based index).
pub fn bethe_residue(prob: &BetheProblem, roots: &BetheRoots, i: usize) -> Result<Complex64> {
    let n = roots.len();
    if i >= n {
        return Err(Error::RootIndex { index: i, n });
    }
    roots.validate(prob)?;
    Ok(raw_residue(prob, roots.as_slice(), i).0)
}

/// Residue and the sum of the magnitudes of its terms.
fn raw_residue(prob: &BetheProblem, z: &[Complex64], i: usize) -> (Complex64, f64) {
    let zi = z[i];
    let mut sum = ZERO;
    let mut mag = 0.0;
    for (j, &zj) in z.iter().enumerate() {
        if j != i {
            let t = 2.0 / (zi - zj);
            sum += t;
            mag += t.norm();
        }
    }
    let pz = poly::eval_complex(&prob.p, zi);
    let qz = poly::eval_complex(&prob.q, zi);
    sum += qz / pz;
    mag += prob.magnitude_q(zi) / pz.norm();
    (sum, mag)
}

/// Residues divided by the magnitude of their terms.
pub fn scaled_residuals(prob: &BetheProblem, roots: &BetheRoots) -> Result<Vec<f64>> {
    roots.validate(prob)?;
    Ok((0..roots.len())
        .map(|i| {
            let (r, mag) = raw_residue(prob, roots.as_slice(), i);
            if !r.norm().is_finite() || !mag.is_finite() {
                f64::INFINITY
            } else if r.norm() == 0.0 {
                0.0
            } else {
                r.norm() / mag
            }
        })
        .collect())
}

pub fn max_scaled_residual(prob: &BetheProblem, roots: &BetheRoots) -> Result<f64> {
    Ok(scaled_residuals(prob, roots)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Search settings for [`solve_roots_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Total number of Newton starts for `n ≥ 2`.
    pub starts: usize,
    /// Also search for and return non-real configurations.
    pub include_complex: bool,
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            starts: 200,
            include_complex: false,
            max_iterations: 100,
        }
    }
}

/// All real root configurations found with the default search.
pub fn solve_roots(prob: &BetheProblem) -> Result<Vec<BetheRoots>> {
    solve_roots_with(prob, &SolveOptions::default())
}

pub fn solve_roots_with(prob: &BetheProblem, opts: &SolveOptions) -> Result<Vec<BetheRoots>> {
    let n = prob.n;
    if n == 0 {
        return Ok(vec![BetheRoots::empty()]);
    }
    let found = if n == 1 {
        single_root_configurations(prob)?
    } else {
        let reduced = prob.without_common_monomial();
        multi_start(&reduced, opts)
            .into_iter()
            .filter(|c| max_scaled_residual(prob, c).is_ok_and(|r| r < RESIDUAL_TOL))
            .collect()
    };
    if found.is_empty() {
        return Err(if n == 1 {
            Error::NoRealSolution
        } else {
            Error::NonConvergence { starts: opts.starts }
        });
    }
    let has_real = found.iter().any(BetheRoots::is_real);
    let out: Vec<BetheRoots> = if opts.include_complex {
        found
    } else {
        found.into_iter().filter(BetheRoots::is_real).collect()
    };
    if !has_real && !opts.include_complex {
        return Err(Error::NoRealSolution);
    }
    Ok(out)
}

/// For one root the Bethe equation is `Q(z₁) = 0` away from the zeros of `P`.
fn single_root_configurations(prob: &BetheProblem) -> Result<Vec<BetheRoots>> {
    if poly::degree(&prob.q).is_none() {
        return Err(Error::InvalidProblem(
            "Q vanishes identically; every point solves the single-root equation".into(),
        ));
    }
    let mut out: Vec<BetheRoots> = poly::roots(&prob.q)
        .into_iter()
        .map(|z| BetheRoots::new(vec![z]))
        .filter(|r| r.check_poles(prob).is_ok())
        .collect();
    out.sort_by(compare_configs);
    out.dedup_by(|x, y| same_config(x, y));
    Ok(out)
}

fn compare_configs(x: &BetheRoots, y: &BetheRoots) -> std::cmp::Ordering {
    for (a, b) in x.roots.iter().zip(&y.roots) {
        let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn same_config(x: &BetheRoots, y: &BetheRoots) -> bool {
    let tol = 1e-7 * x.scale().max(y.scale());
    if x.len() != y.len() {
        return false;
    }
    // order-free comparison: near-equal real parts can sort either way
    let mut used = vec![false; y.len()];
    x.roots.iter().all(|a| {
        let hit = y
            .roots
            .iter()
            .enumerate()
            .position(|(j, b)| !used[j] && (a - b).norm() <= tol);
        if let Some(j) = hit {
            used[j] = true;
        }
        hit.is_some()
    })
}

/// Radical inverse in base `b` (Halton component).
fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn multi_start(prob: &BetheProblem, opts: &SolveOptions) -> Vec<BetheRoots> {
    let n = prob.n;
    let seeds = poly::roots(&prob.q);
    let seed_radius = seeds.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = 2.0_f64.max(1.5 * seed_radius);

    let mut starts: Vec<Vec<Complex64>> = Vec::with_capacity(opts.starts);
    let budget = opts.starts.max(1);
    let (n_seeded, n_complex) = if opts.include_complex {
        (budget / 4, budget / 2)
    } else {
        (budget / 4, 0)
    };
    let n_real = budget - n_seeded - n_complex;
    let dim = |k: usize| PRIMES[k % PRIMES.len()];
    // Every other start box is stretched log-uniformly over [0.1, 100] so that
    // roots pushed far out by a nearly cancelling leading coefficient are
    // reachable.
    let stretch = |s: usize, i: usize| {
        if s.is_multiple_of(2) {
            10f64.powf(3.0 * halton(s, dim(3 * i + 7)) - 1.0)
        } else {
            1.0
        }
    };
    for s in 1..=n_real {
        starts.push(
            (0..n)
                .map(|i| Complex64::new(radius * stretch(s, i) * (2.0 * halton(s, dim(i)) - 1.0), 0.0))
                .collect(),
        );
    }
    for s in 1..=n_seeded {
        let real_seeds: Vec<Complex64> = seeds.iter().copied().filter(|z| z.im == 0.0).collect();
        let pool = if opts.include_complex || real_seeds.is_empty() {
            &seeds
        } else {
            &real_seeds
        };
        if pool.is_empty() {
            break;
        }
        starts.push(
            (0..n)
                .map(|i| {
                    let pick = (halton(s, dim(2 * i)) * pool.len() as f64) as usize;
                    let base = pool[pick.min(pool.len() - 1)];
                    let jitter = 0.2 * (1.0 + base.norm()) * (halton(s, dim(2 * i + 1)) - 0.5);
                    base + jitter * (i as f64 + 1.0) / n as f64
                })
                .collect(),
        );
    }
    for s in 1..=n_complex {
        starts.push(
            (0..n)
                .map(|i| {
                    let r = radius * stretch(s, i);
                    Complex64::new(
                        r * (2.0 * halton(s, dim(2 * i)) - 1.0),
                        r * (2.0 * halton(s, dim(2 * i + 1)) - 1.0),
                    )
                })
                .collect(),
        );
    }

    starts.splice(0..0, interval_starts(prob, radius));

    let mut found: Vec<BetheRoots> = Vec::new();
    let push = |cand: BetheRoots, found: &mut Vec<BetheRoots>| {
        if !found.iter().any(|f| same_config(f, &cand)) {
            found.push(cand);
        }
    };
    for start in starts {
        if let Some(cfg) = newton(prob, start, opts.max_iterations) {
            if opts.include_complex && !cfg.is_real() {
                // Conjugate configurations solve the same real problem.
                if let Some(c) = newton(prob, cfg.conj().roots, 8) {
                    push(c, &mut found);
                }
            }
            push(cfg, &mut found);
        }
    }
    found.sort_by(compare_configs);
    found
}

/// Real starts that distribute the roots over the gaps between the real
/// zeros of `P`, one start per distribution and outer span.
fn interval_starts(prob: &BetheProblem, radius: f64) -> Vec<Vec<Complex64>> {
    let n = prob.n;
    let mut poles = poly::real_roots(&prob.p);
    poles.sort_by(f64::total_cmp);
    poles.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + y.abs()));
    let gaps = poles.len() + 1;
    let mut counts = vec![0usize; gaps];
    let mut out = Vec::new();
    // enumerate every way to put n roots into the gaps
    fn compositions(k: usize, left: usize, counts: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
        if k + 1 == counts.len() {
            counts[k] = left;
            acc.push(counts.clone());
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            compositions(k + 1, left - c, counts, acc);
        }
    }
    let mut all = Vec::new();
    compositions(0, n, &mut counts, &mut all);
    for span in [1.0, 4.0, 16.0] {
        let outer = span * radius;
        for comp in &all {
            let mut z = Vec::with_capacity(n);
            for (g, &k) in comp.iter().enumerate() {
                let lo = if g == 0 { poles.first().map_or(-outer, |p| p - outer) } else { poles[g - 1] };
                let hi = if g == gaps - 1 { poles.last().map_or(outer, |p| p + outer) } else { poles[g] };
                z.extend((1..=k).map(|j| Complex64::new(lo + (hi - lo) * j as f64 / (k + 1) as f64, 0.0)));
            }
            out.push(z);
        }
    }
    out
}

/// `G_i = P(z_i) Σ_{j≠i} 2/(z_i − z_j) + Q(z_i)`; same zeros as the Bethe
/// residues away from the zeros of `P`, without the poles.
fn cleared_system(prob: &BetheProblem, z: &[Complex64]) -> DVector<Complex64> {
    DVector::from_iterator(
        z.len(),
        (0..z.len()).map(|i| {
            let s: Complex64 = (0..z.len())
                .filter(|&j| j != i)
                .map(|j| 2.0 / (z[i] - z[j]))
                .sum();
            poly::eval_complex(&prob.p, z[i]) * s + poly::eval_complex(&prob.q, z[i])
        }),
    )
}

fn cleared_jacobian(prob: &BetheProblem, z: &[Complex64]) -> DMatrix<Complex64> {
    let n = z.len();
    let mut jac = DMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        let (pz, dpz) = poly::eval_complex_with_derivative(&prob.p, z[i]);
        let (_, dqz) = poly::eval_complex_with_derivative(&prob.q, z[i]);
        let mut s = ZERO;
        let mut s2 = ZERO;
        for j in 0..n {
            if j != i {
                let inv = 1.0 / (z[i] - z[j]);
                s += 2.0 * inv;
                s2 += 2.0 * inv * inv;
                jac[(i, j)] = pz * 2.0 * inv * inv;
            }
        }
        jac[(i, i)] = dpz * s - pz * s2 + dqz;
    }
    jac
}

fn newton(prob: &BetheProblem, start: Vec<Complex64>, max_iter: usize) -> Option<BetheRoots> {
    let mut z = start;
    let mut g = cleared_system(prob, &z);
    let mut norm = g.norm();
    for _ in 0..max_iter {
        if !norm.is_finite() {
            return None;
        }
        let jac = cleared_jacobian(prob, &z);
        let step = jac.lu().solve(&(-&g))?;
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Complex64> = z
                .iter()
                .zip(step.iter())
                .map(|(zi, si)| zi + damping * si)
                .collect();
            let gt = cleared_system(prob, &trial);
            let nt = gt.norm();
            if nt.is_finite() && nt < norm {
                z = trial;
                g = gt;
                norm = nt;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        let scale = 1.0 + z.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale > 1e8 {
            return None;
        }
        let step_size = damping * step.norm();
        if !accepted || step_size <= 1e-15 * scale || norm == 0.0 {
            break;
        }
    }
    let scale = 1.0 + z.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if z.iter().all(|x| x.im.abs() <= 1e-8 * scale) {
        let mut zr: Vec<Complex64> = z.iter().map(|x| Complex64::new(x.re, 0.0)).collect();
        for _ in 0..6 {
            let g = cleared_system(prob, &zr);
            let Some(step) = cleared_jacobian(prob, &zr).lu().solve(&(-&g)) else {
                break;
            };
            for (zi, si) in zr.iter_mut().zip(step.iter()) {
                *zi = Complex64::new(zi.re + si.re, 0.0);
            }
        }
        z = zr;
    }
    let roots = BetheRoots::new(z);
    match max_scaled_residual(prob, &roots) {
        Ok(r) if r < RESIDUAL_TOL => Some(roots),
        _ => None,
    }
}

/// `W` coefficients from the root power sums. Fails when the roots do not
/// satisfy the Bethe equations.
pub fn derive_w(prob: &BetheProblem, roots: &BetheRoots) -> Result<WCoefficients> {
    if roots.len() != prob.n {
        return Err(Error::InvalidProblem(format!(
            "expected {} roots, got {}",
            prob.n,
            roots.len()
        )));
    }
    let residual = max_scaled_residual(prob, roots)?;
    if residual >= RESIDUAL_TOL {
        return Err(Error::InvalidRoots { residual });
    }
    Ok(w_from_sums(prob, roots))
}

fn w_from_sums(prob: &BetheProblem, roots: &BetheRoots) -> WCoefficients {
    let p = &prob.p;
    let q = &prob.q;
    let n = prob.n as f64;
    let s1 = roots.power_sum(1);
    let s2 = roots.power_sum(2);
    let s3 = roots.power_sum(3);
    let pair = roots.pair_sum();
    let cross = roots.cross_sum();
    let top5 = 2.0 * (n - 1.0) * p[5] + q[4];
    let top4 = 2.0 * (n - 1.0) * p[4] + q[3];
    let top3 = 2.0 * (n - 1.0) * p[3] + q[2];
    let nn1 = n * (n - 1.0);

    let w3 = Complex64::new(-nn1 * p[5] - n * q[4], 0.0);
    let w2 = -top5 * s1 - nn1 * p[4] - n * q[3];
    let w1 = -top5 * s2 - 2.0 * p[5] * pair - top4 * s1 - nn1 * p[3] - n * q[2];
    let w0 = -top5 * s3 - 2.0 * p[5] * cross - top4 * s2 - 2.0 * p[4] * pair - top3 * s1
        - nn1 * p[2]
        - n * q[1];
    WCoefficients {
        w: [w0, w1, w2, w3],
    }
}

/// Scaled residual of the ODE for `φ = ∏ (z − z_i)`: the maximum over
/// `samples` points of `|P φ'' + Q φ' + W φ|`, divided by the maximum over the
/// same points of `|P φ''| + |Q φ'| + |W φ|`. Sample points are spread along
/// the real axis over an interval covering the real parts of the roots.
pub fn verify_polynomial_solution(
    prob: &BetheProblem,
    w: &WCoefficients,
    roots: &BetheRoots,
    samples: usize,
) -> f64 {
    let samples = samples.max(10);
    let coeffs = roots.polynomial();
    let n = roots.len().max(1) as f64;
    let centre = roots.as_slice().iter().map(|z| z.re).sum::<f64>() / n;
    let half_width = 1.0
        + roots
            .as_slice()
            .iter()
            .map(|z| (z - centre).norm())
            .fold(0.0, f64::max);

    let mut num = 0.0_f64;
    let mut den = 0.0_f64;
    for s in 0..samples {
        // Offset keeps samples off any particular root.
        let t = (s as f64 + 0.5) / samples as f64;
        let z = Complex64::new(centre - half_width + 2.0 * half_width * t + 1e-3, 0.0);
        let (phi, dphi, ddphi) = complex_eval_with_derivatives(&coeffs, z);
        let pz = poly::eval_complex(&prob.p, z);
        let qz = poly::eval_complex(&prob.q, z);
        let wz = w.w.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
        let terms = [pz * ddphi, qz * dphi, wz * phi];
        let total: Complex64 = terms.iter().sum();
        num = num.max(total.norm());
        den = den.max(terms.iter().map(|t| t.norm()).sum());
    }
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn complex_eval_with_derivatives(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let (mut p, mut dp, mut ddp) = (ZERO, ZERO, ZERO);
    for &ck in c.iter().rev() {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp, ddp)
}

/// One of the double-sum identities used to reduce the substituted equation.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub power: i32,
    /// `Σ_i Σ_{j≠i} z_i^k / (z_i − z_j)` summed directly.
    pub lhs: Complex64,
    /// The closed form in power sums.
    pub rhs: Complex64,
    /// Sum of the magnitudes of the terms of `lhs`.
    pub magnitude: f64,
}

impl IdentityCheck {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).norm() / (1.0 + self.magnitude)
    }
}

/// Evaluates both sides of the five double-sum identities for powers 0..=4.
pub fn summation_identities(roots: &BetheRoots) -> [IdentityCheck; 5] {
    let z = roots.as_slice();
    let n = z.len() as f64;
    let mut s = [ZERO; 4];
    for (k, sk) in s.iter_mut().enumerate() {
        *sk = z.iter().map(|x| x.powi(k as i32)).sum();
    }
    let mut pair = ZERO;
    let mut cross = ZERO;
    for i in 0..z.len() {
        for j in 0..z.len() {
            if i < j {
                pair += z[i] * z[j];
            }
            if i != j {
                cross += z[i] * z[i] * z[j];
            }
        }
    }
    let rhs = [
        ZERO,
        Complex64::new(0.5 * n * (n - 1.0), 0.0),
        (n - 1.0) * s[1],
        (n - 1.0) * s[2] + pair,
        (n - 1.0) * s[3] + cross,
    ];
    std::array::from_fn(|k| {
        let mut lhs = ZERO;
        let mut magnitude = 0.0;
        for i in 0..z.len() {
            for j in 0..z.len() {
                if i != j {
                    let t = z[i].powi(k as i32) / (z[i] - z[j]);
                    lhs += t;
                    magnitude += t.norm();
                }
            }
        }
        IdentityCheck {
            power: k as i32,
            lhs,
            rhs: rhs[k],
            magnitude,
        }
    })
}
