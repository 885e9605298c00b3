//! Assembly of solved states: Bethe roots, energies, closed-form
//! wavefunctions and node counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    self, constraints_from_w, family_root_constraints, normalizability, to_bethe_problem, Family,
    Normalizability, PotentialSpec,
};
use crate::fba::{self, BetheRoots, SolveOptions};
use crate::oracle::GridSpec;
use crate::poly;

/// Closed-form wavefunction `r^l z^a exp(G) φ(z)` with `z = 1/(1+λr²)`.
///
/// First family: `G = −Σ b_j ((1+λr²)^j − 1)`, so the exponential equals one
/// at the origin. Second family: `G = −Σ b_j z^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavefunction {
    family: Family,
    lambda: f64,
    l: u32,
    a: f64,
    b: Vec<f64>,
    /// Monic `φ(z) = ∏(z − z_i)`, lowest degree first.
    phi: Vec<f64>,
}

impl Wavefunction {
    pub fn new(spec: &PotentialSpec, roots: &[f64]) -> Self {
        let mut phi = vec![1.0];
        for &z in roots {
            let mut next = vec![0.0; phi.len() + 1];
            for (k, &c) in phi.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * z;
            }
            phi = next;
        }
        Self {
            family: spec.family(),
            lambda: spec.space().lambda(),
            l: spec.space().l(),
            a: spec.gauge().a(),
            b: spec.gauge().b().to_vec(),
            phi,
        }
    }

    pub fn phi_coefficients(&self) -> &[f64] {
        &self.phi
    }

    /// `G(r)` together with `dG/ds` and `d²G/ds²`, `s = 1+λr²`, plus the
    /// `−a ln s` part.
    fn gauge_log(&self, s: f64) -> (f64, f64, f64) {
        let mut g = -self.a * s.ln();
        let mut gs = -self.a / s;
        let mut gss = self.a / (s * s);
        for (idx, &bj) in self.b.iter().enumerate() {
            let j = idx as i32 + 1;
            let jf = j as f64;
            match self.family {
                Family::First => {
                    g -= bj * (s.powi(j) - 1.0);
                    gs -= bj * jf * s.powi(j - 1);
                    gss -= bj * jf * (jf - 1.0) * s.powi(j - 2);
                }
                Family::Second => {
                    g -= bj * s.powi(-j);
                    gs += bj * jf * s.powi(-j - 1);
                    gss -= bj * jf * (jf + 1.0) * s.powi(-j - 2);
                }
            }
        }
        (g, gs, gss)
    }

    /// `ln|ψ| − l ln|r|` without the polynomial factor, i.e. `−a ln s + G`.
    pub fn log_gauge(&self, r: f64) -> f64 {
        self.gauge_log(1.0 + self.lambda * r * r).0
    }

    /// `ln|ψ(r)|`, finite wherever `ψ` is nonzero even when `ψ` itself
    /// would overflow.
    pub fn log_abs(&self, r: f64) -> f64 {
        let s = 1.0 + self.lambda * r * r;
        let (g, _, _) = self.gauge_log(s);
        self.l as f64 * r.abs().ln() + g + poly::eval(&self.phi, 1.0 / s).abs().ln()
    }

    pub fn eval(&self, r: f64) -> f64 {
        let s = 1.0 + self.lambda * r * r;
        let (g, _, _) = self.gauge_log(s);
        r.powi(self.l as i32) * g.exp() * poly::eval(&self.phi, 1.0 / s)
    }

    /// `(ψ, ψ', ψ'')` at `r`, differentiated in closed form.
    pub fn eval_with_derivatives(&self, r: f64) -> (f64, f64, f64) {
        let lam = self.lambda;
        let s = 1.0 + lam * r * r;
        let (ds, dds) = (2.0 * lam * r, 2.0 * lam);
        let (g, gs, gss) = self.gauge_log(s);
        let dg = gs * ds;
        let ddg = gss * ds * ds + gs * dds;

        let z = 1.0 / s;
        let dz = -ds / (s * s);
        let ddz = -dds / (s * s) + 2.0 * ds * ds / (s * s * s);
        let (p, pz, pzz) = poly::eval_with_derivatives(&self.phi, z);
        let dp = pz * dz;
        let ddp = pzz * dz * dz + pz * ddz;

        let e = g.exp();
        let f = e * p;
        let df = e * (dg * p + dp);
        let ddf = e * ((ddg + dg * dg) * p + 2.0 * dg * dp + ddp);

        let l = self.l as i32;
        let lf = l as f64;
        let rl = r.powi(l);
        let rl1 = if l >= 1 { lf * r.powi(l - 1) } else { 0.0 };
        let rl2 = if l >= 2 { lf * (lf - 1.0) * r.powi(l - 2) } else { 0.0 };
        (rl * f, rl1 * f + rl * df, rl2 * f + 2.0 * rl1 * df + rl * ddf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvedState {
    spec: PotentialSpec,
    roots: BetheRoots,
    energy: f64,
    epsilon: f64,
    wavefunction: Wavefunction,
    nodes: usize,
    normalizability: Normalizability,
}

impl SolvedState {
    /// Completed spec (all of `A`, `B_k` filled).
    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn roots(&self) -> &BetheRoots {
        &self.roots
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.roots.to_real().unwrap_or_default()
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `ε` of the transformed equation; for the first family read off the
    /// `W` coefficients, for the second the fixed gauge value.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn wavefunction(&self) -> &Wavefunction {
        &self.wavefunction
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn normalizability(&self) -> &Normalizability {
        &self.normalizability
    }

    pub fn normalizable(&self) -> bool {
        self.normalizability.is_normalizable()
    }

    /// Potential at `r` for the completed spec.
    pub fn potential(&self, r: f64) -> Result<f64> {
        families::potential_eval(&self.spec, r)
    }
}

fn checked_real_roots(spec: &PotentialSpec, roots: &BetheRoots) -> Result<Vec<f64>> {
    let z = roots
        .to_real()
        .ok_or(Error::InvalidRoots { residual: f64::NAN })?;
    if z.len() != spec.n() {
        return Err(Error::InvalidRoots { residual: f64::NAN });
    }
    if !z.is_empty() {
        let prob = to_bethe_problem(spec)?;
        let res = fba::max_scaled_residual(&prob, roots).map_err(|_| Error::InvalidRoots {
            residual: f64::INFINITY,
        })?;
        if res >= fba::RESIDUAL_TOL {
            return Err(Error::InvalidRoots { residual: res });
        }
    }
    Ok(z)
}

/// `E_{n,l}` from the family energy formula.
pub fn energy(spec: &PotentialSpec, roots: &BetheRoots) -> Result<f64> {
    let z = checked_real_roots(spec, roots)?;
    Ok(energy_unchecked(spec, &z))
}

fn energy_unchecked(spec: &PotentialSpec, z: &[f64]) -> f64 {
    let sp = spec.space();
    let g = spec.gauge();
    let (lam, l, d, n) = (sp.lambda(), sp.l() as f64, sp.d() as f64, spec.n() as f64);
    let a = g.a();
    let bj = |j: usize| g.b().get(j - 1).copied().unwrap_or(0.0);
    let (b1, b2, b3) = (bj(1), bj(2), bj(3));
    let s1: f64 = z.iter().sum();
    let s2: f64 = z.iter().map(|x| x * x).sum();
    let s3: f64 = z.iter().map(|x| x * x * x).sum();
    let shift = l * (l + d - 1.0);
    let inner = match spec.family() {
        Family::First => {
            2.0 * (4.0 * a + 4.0 * n - 1.0) * s1 + 8.0 * (a + n) * b1 + 2.0 * (a + n) * (2.0 * l + d)
                - 2.0 * b1
                - shift
        }
        Family::Second => {
            2.0 * a * (4.0 * n + 2.0 * l + d)
                + 2.0 * n * (2.0 * n + 1.0)
                + 2.0 * b1 * (4.0 * a + 4.0 * n - 2.0 * l - d + 3.0 - 4.0 * s1)
                - 16.0 * b2 * (s2 - s1)
                - 24.0 * b3 * (s3 - s2)
                - shift
        }
    };
    lam * inner
}

/// Number of roots inside the image of the open domain in `z`, which is the
/// number of radial nodes of `ψ` on `r > 0`.
fn analytic_nodes(spec: &PotentialSpec, z: &[f64]) -> usize {
    let positive = spec.space().lambda() > 0.0;
    z.iter()
        .filter(|&&zi| if positive { zi > 0.0 && zi < 1.0 } else { zi > 1.0 })
        .count()
}

/// Radius where `z(r) = z_i`.
fn node_radius(lambda: f64, zi: f64) -> f64 {
    ((1.0 / zi - 1.0) / lambda).sqrt()
}

/// Completes the spec for one root configuration and assembles the state.
pub fn assemble_state(spec: &PotentialSpec, roots: &BetheRoots) -> Result<SolvedState> {
    let z = checked_real_roots(spec, roots)?;
    let complete = family_root_constraints(spec, roots)?;
    let energy = energy_unchecked(spec, &z);
    let epsilon = match spec.family() {
        Family::First => {
            let prob = to_bethe_problem(spec)?;
            let w = fba::derive_w(&prob, roots)?;
            constraints_from_w(spec, &w)?.epsilon
        }
        Family::Second => spec
            .epsilon()
            .ok_or_else(|| Error::IncompleteSpec("epsilon".into()))?,
    };
    Ok(SolvedState {
        wavefunction: Wavefunction::new(spec, &z),
        nodes: analytic_nodes(spec, &z),
        normalizability: normalizability(&complete),
        spec: complete,
        roots: roots.clone(),
        energy,
        epsilon,
    })
}

/// Outcome of [`solve_states_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// One state per real root configuration, in canonical root order.
    pub states: Vec<SolvedState>,
    /// Non-real configurations, only filled when requested.
    pub complex_roots: Vec<BetheRoots>,
}

/// All algebraic states of degree `spec.n()` with real roots.
pub fn solve_states(spec: &PotentialSpec) -> Result<Vec<SolvedState>> {
    Ok(solve_states_with(spec, &SolveOptions::default())?.states)
}

pub fn solve_states_with(spec: &PotentialSpec, opts: &SolveOptions) -> Result<SolveOutcome> {
    let prob = to_bethe_problem(spec)?;
    let configs = fba::solve_roots_with(&prob, opts)?;
    let mut out = SolveOutcome {
        states: Vec::new(),
        complex_roots: Vec::new(),
    };
    for cfg in configs {
        if cfg.is_real() {
            out.states.push(assemble_state(spec, &cfg)?);
        } else {
            out.complex_roots.push(cfg);
        }
    }
    Ok(out)
}

/// Evaluates the unnormalized closed-form wavefunction.
pub fn wavefunction_eval(state: &SolvedState, r: f64) -> Result<f64> {
    state.spec.space().check_coordinate(r)?;
    Ok(state.wavefunction.eval(r))
}

/// Counts sign changes of `ψ` over the grid on `r > 0` and checks the count
/// against the roots lying inside the domain.
pub fn node_count(state: &SolvedState, grid: &GridSpec) -> Result<usize> {
    let values: Vec<(f64, f64)> = grid
        .nodes()
        .into_iter()
        .map(|r| (r, state.wavefunction.eval(r)))
        .collect();
    let mut changes = 0;
    let mut last: Option<(f64, f64)> = None;
    for &(r, v) in &values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if let Some((_, lv)) = last {
            if lv.signum() != v.signum() {
                changes += 1;
            }
        }
        last = Some((r, v));
    }
    if changes != state.nodes {
        let lam = state.spec.space().lambda();
        let r = state
            .real_roots()
            .into_iter()
            .filter(|&zi| if lam > 0.0 { zi > 0.0 && zi < 1.0 } else { zi > 1.0 })
            .map(|zi| node_radius(lam, zi))
            .next()
            .unwrap_or(f64::NAN);
        return Err(Error::GridTooCoarse { r });
    }
    Ok(changes)
}

/// The `d = 1` counterpart of a spec, with parity exponent `p`.
pub fn to_one_dimensional(spec: &PotentialSpec, p: u32) -> Result<PotentialSpec> {
    spec.to_one_dimensional(p)
}

/// Real roots `x` of the depressed cubic `t³ + u t + v = 0`, shifted by
/// `shift`. Uses the radical form when it yields the single real root and
/// the trigonometric form for three real roots.
pub fn cardano(shift: f64, u: f64, v: f64) -> Vec<f64> {
    let disc = (v / 2.0).powi(2) + (u / 3.0).powi(3);
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let t = (-v / 2.0 + sq).cbrt() + (-v / 2.0 - sq).cbrt();
        let mut out = vec![shift + t];
        if disc == 0.0 && u != 0.0 {
            // double root −t/2 alongside the simple root t
            out.push(shift - t / 2.0);
        }
        out.sort_by(f64::total_cmp);
        out
    } else {
        let rho = 2.0 * (-u / 3.0).sqrt();
        let cos_theta = ((-v / 2.0) / (-(u / 3.0).powi(3)).sqrt()).clamp(-1.0, 1.0);
        let theta = cos_theta.acos();
        let mut out: Vec<f64> = (0..3)
            .map(|k| shift + rho * ((theta - std::f64::consts::TAU * k as f64) / 3.0).cos())
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Real roots of `α z² + β z + γ` through the cancellation-free pairing,
/// given `disc = √(β² − 4αγ)/2`-style half discriminant `delta`:
/// roots `(−β/2 ± δ)/α`.
fn stable_quadratic(alpha: f64, half_beta: f64, gamma: f64, delta: f64) -> Vec<f64> {
    if alpha == 0.0 {
        return if half_beta == 0.0 { vec![] } else { vec![-gamma / (2.0 * half_beta)] };
    }
    let q = -half_beta + if half_beta > 0.0 { -delta } else { delta };
    let mut out = if q == 0.0 {
        vec![-half_beta / alpha]
    } else {
        let first = q / alpha;
        let second = gamma / q;
        if delta == 0.0 { vec![first] } else { vec![first, second] }
    };
    out.sort_by(f64::total_cmp);
    out
}

/// Closed-form candidates for the single root of an `n = 1` state.
pub fn closed_form_z1(spec: &PotentialSpec) -> Result<Vec<f64>> {
    if spec.n() != 1 {
        return Err(Error::InvalidParameter {
            field: "n",
            reason: "closed forms exist only for n = 1".into(),
        });
    }
    let sp = spec.space();
    let g = spec.gauge();
    let (l, d) = (sp.l() as f64, sp.d() as f64);
    let a = g.a();
    let bj = |j: usize| g.b().get(j - 1).copied().unwrap_or(0.0);
    let (b1, b2) = (bj(1), bj(2));
    let prob = to_bethe_problem(spec)?;

    let candidates = match (spec.family(), spec.m()) {
        (Family::First, 1) => {
            let delta_sq = 4.0 * (a + b1).powi(2) + 4.0 * (a + 2.0 * b1) + 1.0
                - (l + (d - 1.0) / 2.0) * (4.0 * a - 4.0 * b1 - l - (d - 5.0) / 2.0);
            if delta_sq < 0.0 {
                return Err(Error::NoRealSolution);
            }
            let half = 2.0 * a - 2.0 * b1 - l - (d - 3.0) / 2.0;
            stable_quadratic(4.0 * a + 3.0, -half, -4.0 * b1, delta_sq.sqrt())
        }
        (Family::Second, 1) => {
            let f = 4.0 * a + 4.0 * b1 + 3.0;
            let gg = 4.0 * a - 2.0 * l - d + 3.0;
            if b1 == 0.0 {
                if f == 0.0 { vec![] } else { vec![gg / f] }
            } else {
                let delta_sq = 16.0 * (a - b1).powi(2) + 24.0 * a + 8.0 * (4.0 * l + 2.0 * d - 3.0) * b1 + 9.0;
                if delta_sq < 0.0 {
                    return Err(Error::NoRealSolution);
                }
                // 4b₁z² − f z + g with half discriminant Δ/2
                stable_quadratic(4.0 * b1, -f / 2.0, gg, delta_sq.sqrt() / 2.0)
            }
        }
        (Family::First, 2) if 4.0 * a + 3.0 != 0.0 => {
            let al = 4.0 * a + 3.0;
            let c = 4.0 * a - 4.0 * b1 - 2.0 * l - d + 3.0;
            let u = 4.0 / al * (-b1 + 2.0 * b2 - c * c / (12.0 * al));
            let v = -8.0 / al * (b2 + c.powi(3) / (108.0 * al * al) + c * (b1 - 2.0 * b2) / (6.0 * al));
            cardano(c / (3.0 * al), u, v)
        }
        (Family::Second, 2) if b2 != 0.0 => {
            let e = b1 - 2.0 * b2;
            let f = 4.0 * a + 4.0 * b1 + 3.0;
            let u = -1.0 / (8.0 * b2) * (f + 2.0 * e * e / (3.0 * b2));
            let v = 1.0 / (8.0 * b2)
                * (4.0 * a - 2.0 * l - d + 3.0 + 2.0 * e.powi(3) / (27.0 * b2 * b2) + e * f / (6.0 * b2));
            cardano(-e / (6.0 * b2), u, v)
        }
        // quartics and degenerate leading coefficients
        _ => poly::real_roots(prob.q()),
    };

    let admissible: Vec<f64> = candidates
        .into_iter()
        .filter(|z| z.is_finite())
        .filter(|&z| {
            let pz = poly::eval(prob.p(), z).abs();
            let scale = prob.p().iter().map(|c| c.abs()).sum::<f64>() * (1.0 + z.abs()).powi(5);
            pz > fba::POLE_TOL * scale
        })
        .collect();
    if admissible.is_empty() {
        return Err(Error::NoRealSolution);
    }
    Ok(admissible)
}
