//! The two QES families extending the curved-space oscillator.
//!
//! First family: `V(r) = λA − λA/s + λ Σ_k B_k s^k`, second family:
//! `V(r) = λA − λA/s + λ Σ_k B_k s^{−k−1}`, with `s = 1 + λr²` and
//! `k = 1..2m`. In the variable `z = 1/s` the gauge factors are
//! `z^a exp(−Σ b_j z^{−j})` and `z^a exp(−Σ b_j z^j)` respectively; what is
//! left is a polynomial-coefficient equation for `φ(z)` handed to [`crate::fba`].
//!
//! The gauge parameters `(a, b_1..b_m)` are the inputs. Part of the `B_k` is
//! fixed by them alone; the rest (and `A` for the second family) follows
//! from the Bethe roots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fba::{self, BetheProblem, BetheRoots, WCoefficients};
use crate::oscillator::SpaceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    First,
    Second,
}

impl Family {
    pub fn index(&self) -> u8 {
        match self {
            Family::First => 1,
            Family::Second => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Family::First),
            2 => Ok(Family::Second),
            other => Err(Error::UnsupportedCase {
                field: "family",
                value: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeParams {
    family: Family,
    a: f64,
    b: Vec<f64>,
}

impl GaugeParams {
    pub fn new(family: Family, a: f64, b: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&b.len()) {
            return Err(Error::UnsupportedCase {
                field: "m",
                value: b.len().to_string(),
            });
        }
        if !a.is_finite() || b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "b",
                reason: "gauge parameters must be finite".into(),
            });
        }
        Ok(Self { family, a, b })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// `b_j` with 1-based index, zero beyond `m`.
    fn bj(&self, j: usize) -> f64 {
        self.b.get(j - 1).copied().unwrap_or(0.0)
    }
}

/// `(k, B_k)` pairs with 1-based `k`.
pub type PartialB = Vec<(usize, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    space: SpaceConfig,
    gauge: GaugeParams,
    n: usize,
    big_a: Option<f64>,
    big_b: Vec<Option<f64>>,
    epsilon: Option<f64>,
}

/// Shorthand for the recurring parameter combinations.
struct Terms {
    a: f64,
    b1: f64,
    b2: f64,
    b3: f64,
    l: f64,
    d: f64,
    n: f64,
}

impl Terms {
    fn new(space: &SpaceConfig, g: &GaugeParams, n: usize) -> Self {
        Self {
            a: g.a,
            b1: g.bj(1),
            b2: g.bj(2),
            b3: g.bj(3),
            l: space.l() as f64,
            d: space.d() as f64,
            n: n as f64,
        }
    }

    /// `(2a+2n)(2a+2n+1)`
    fn quantized_a(&self) -> f64 {
        let t = 2.0 * self.a + 2.0 * self.n;
        t * (t + 1.0)
    }
}

impl PotentialSpec {
    /// Builds the spec for degree-`n` polynomial states and applies every
    /// constraint that does not depend on the Bethe roots.
    pub fn new(space: SpaceConfig, gauge: GaugeParams, n: usize) -> Result<Self> {
        let m = gauge.m();
        let mut big_b = vec![None; 2 * m];
        let fixed = match gauge.family {
            Family::First => family1_fixed_b(&gauge, &space)?,
            Family::Second => family2_fixed_b(&gauge, &space)?,
        };
        for (k, v) in fixed {
            big_b[k - 1] = Some(v);
        }
        let t = Terms::new(&space, &gauge, n);
        let (big_a, epsilon) = match gauge.family {
            Family::First => (Some(t.quantized_a()), None),
            Family::Second => (None, Some(-2.0 * t.a * (2.0 * t.a - 2.0 * t.l - t.d + 1.0))),
        };
        Ok(Self {
            space,
            gauge,
            n,
            big_a,
            big_b,
            epsilon,
        })
    }

    pub fn space(&self) -> &SpaceConfig {
        &self.space
    }

    pub fn gauge(&self) -> &GaugeParams {
        &self.gauge
    }

    pub fn family(&self) -> Family {
        self.gauge.family
    }

    pub fn m(&self) -> usize {
        self.gauge.m()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_a(&self) -> Option<f64> {
        self.big_a
    }

    pub fn big_b(&self) -> &[Option<f64>] {
        &self.big_b
    }

    /// `ε` where it is fixed without roots (second family).
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn is_complete(&self) -> bool {
        self.big_a.is_some() && self.big_b.iter().all(Option::is_some)
    }

    /// `(A, [B_1..B_2m])` of a complete spec.
    pub fn coefficients(&self) -> Result<(f64, Vec<f64>)> {
        let a = self
            .big_a
            .ok_or_else(|| Error::IncompleteSpec("A".into()))?;
        let b = self
            .big_b
            .iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| Error::IncompleteSpec(format!("B{}", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        Ok((a, b))
    }

    /// The same family member in one dimension with parity exponent `p`,
    /// constraints recomputed for `d = 1`.
    pub fn to_one_dimensional(&self, p: u32) -> Result<Self> {
        let space = self.space.with_dimension(1, p)?;
        Self::new(space, self.gauge.clone(), self.n)
    }

    /// Returns a copy with `B_k` replaced; for tests and what-if evaluation.
    pub fn with_coefficients(&self, big_a: f64, big_b: &[f64]) -> Result<Self> {
        if big_b.len() != 2 * self.m() {
            return Err(Error::InvalidParameter {
                field: "B",
                reason: format!("expected {} coefficients", 2 * self.m()),
            });
        }
        Ok(Self {
            big_a: Some(big_a),
            big_b: big_b.iter().copied().map(Some).collect(),
            ..self.clone()
        })
    }
}

fn require(g: &GaugeParams, family: Family) -> Result<()> {
    if g.family != family {
        return Err(Error::WrongFamily {
            expected: match family {
                Family::First => "first",
                Family::Second => "second",
            },
        });
    }
    Ok(())
}

/// Coefficients of the first family fixed by the gauge parameters alone.
pub fn family1_fixed_b(g: &GaugeParams, space: &SpaceConfig) -> Result<PartialB> {
    require(g, Family::First)?;
    let t = Terms::new(space, g, 0);
    let (a, b1, b2, b3, l, d) = (t.a, t.b1, t.b2, t.b3, t.l, t.d);
    Ok(match g.m() {
        1 => vec![
            (1, 2.0 * b1 * (4.0 * a - 2.0 * b1 - 2.0 * l - d - 1.0)),
            (2, 4.0 * b1 * b1),
        ],
        2 => vec![
            (2, 4.0 * (b1 * b1 + b2 * (4.0 * a - 4.0 * b1 - 2.0 * l - d - 3.0))),
            (3, 16.0 * b2 * (b1 - b2)),
            (4, 16.0 * b2 * b2),
        ],
        _ => vec![
            (
                3,
                2.0 * (8.0 * b2 * (b1 - b2) + 3.0 * b3 * (4.0 * a - 4.0 * b1 - 2.0 * l - d - 5.0)),
            ),
            (4, 8.0 * (2.0 * b2 * b2 + 3.0 * b3 * (b1 - 2.0 * b2))),
            (5, 12.0 * b3 * (4.0 * b2 - 3.0 * b3)),
            (6, 36.0 * b3 * b3),
        ],
    })
}

/// Coefficients of the second family fixed by the gauge parameters alone.
pub fn family2_fixed_b(g: &GaugeParams, space: &SpaceConfig) -> Result<PartialB> {
    require(g, Family::Second)?;
    let t = Terms::new(space, g, 0);
    let (b1, b2, b3) = (t.b1, t.b2, t.b3);
    Ok(match g.m() {
        1 => vec![(2, -4.0 * b1 * b1)],
        2 => vec![(3, -16.0 * b2 * (b1 - b2)), (4, -16.0 * b2 * b2)],
        _ => vec![
            (4, -16.0 * b2 * b2 - 24.0 * b3 * (b1 - 2.0 * b2)),
            (5, -12.0 * b3 * (4.0 * b2 - 3.0 * b3)),
            (6, -36.0 * b3 * b3),
        ],
    })
}

/// Symmetric functions of the roots entering the constraint formulas.
#[derive(Debug, Clone, Copy, Default)]
pub struct RootSums {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// `Σ_{i<j} z_i z_j`
    pub pair: f64,
    /// `Σ_{i≠j} z_i² z_j`
    pub cross: f64,
}

impl RootSums {
    pub fn new(z: &[f64]) -> Self {
        let mut s = Self::default();
        for (i, &zi) in z.iter().enumerate() {
            s.s1 += zi;
            s.s2 += zi * zi;
            s.s3 += zi * zi * zi;
            for (j, &zj) in z.iter().enumerate() {
                if i < j {
                    s.pair += zi * zj;
                }
                if i != j {
                    s.cross += zi * zi * zj;
                }
            }
        }
        s
    }
}

/// Completes `spec` with the root-dependent constraints, written out per
/// family member. The roots must solve the spec's Bethe equations.
pub fn family_root_constraints(spec: &PotentialSpec, roots: &BetheRoots) -> Result<PotentialSpec> {
    let z = roots
        .to_real()
        .ok_or(Error::InvalidRoots { residual: f64::NAN })?;
    if z.len() != spec.n {
        return Err(Error::InvalidRoots { residual: f64::NAN });
    }
    let prob = to_bethe_problem(spec)?;
    let residual = if z.is_empty() {
        0.0
    } else {
        fba::max_scaled_residual(&prob, roots).map_err(|_| Error::InvalidRoots {
            residual: f64::INFINITY,
        })?
    };
    if residual >= fba::RESIDUAL_TOL {
        return Err(Error::InvalidRoots { residual });
    }

    let t = Terms::new(&spec.space, &spec.gauge, spec.n);
    let rs = RootSums::new(&z);
    let (a, b1, b2, b3, l, d, n) = (t.a, t.b1, t.b2, t.b3, t.l, t.d, t.n);
    let mut out = spec.clone();
    let mut set = |k: usize, v: f64| out.big_b[k - 1] = Some(v);
    let big_a;
    match (spec.family(), spec.m()) {
        (Family::First, m) => {
            big_a = t.quantized_a();
            let c = 4.0 * a + 4.0 * n;
            if m >= 2 {
                set(
                    1,
                    -2.0 * (c - 1.0) * rs.s2 - 8.0 * rs.pair
                        + 2.0 * (c - 4.0 * b1 - 2.0 * l - d - 1.0) * rs.s1
                        + 2.0 * b1 * (c - 2.0 * b1 - 2.0 * l - d - 1.0)
                        - 4.0 * b2 * (c - 3.0),
                );
            }
            if m == 3 {
                set(
                    2,
                    -2.0 * (c - 1.0) * rs.s3 - 8.0 * rs.cross
                        + 2.0 * (c - 4.0 * b1 - 2.0 * l - d - 1.0) * rs.s2
                        + 8.0 * rs.pair
                        + 8.0 * (b1 - 2.0 * b2) * rs.s1
                        + 4.0 * b1 * b1
                        + 4.0 * b2 * (c - 4.0 * b1 - 2.0 * l - d - 3.0)
                        - 6.0 * b3 * (c - 5.0),
                );
            }
        }
        (Family::Second, m) => {
            let c = 4.0 * a + 4.0 * n;
            let e = 2.0 * l + d;
            let mut aa = t.quantized_a() - 2.0 * b1 * (4.0 * rs.s1 - c + e - 3.0);
            match m {
                1 => {
                    set(1, 2.0 * b1 * (c + 2.0 * b1 + 3.0));
                }
                2 => {
                    set(2, -4.0 * b1 * b1 + 4.0 * b2 * (c + 4.0 * b1 + 5.0));
                    set(
                        1,
                        2.0 * b1 * (c + 2.0 * b1 + 3.0) + 4.0 * b2 * (4.0 * rs.s1 - c + e - 5.0),
                    );
                    aa -= 16.0 * b2 * (rs.s2 - rs.s1);
                }
                _ => {
                    set(3, -16.0 * b2 * (b1 - b2) + 6.0 * b3 * (c + 4.0 * b1 + 7.0));
                    set(
                        2,
                        -4.0 * b1 * b1
                            + 4.0 * b2 * (c + 4.0 * b1 + 5.0)
                            + 6.0 * b3 * (4.0 * rs.s1 - c + e - 7.0),
                    );
                    set(
                        1,
                        2.0 * b1 * (c + 2.0 * b1 + 3.0)
                            + 4.0 * b2 * (4.0 * rs.s1 - c + e - 5.0)
                            + 24.0 * b3 * (rs.s2 - rs.s1),
                    );
                    aa -= 16.0 * b2 * (rs.s2 - rs.s1) + 24.0 * b3 * (rs.s3 - rs.s2);
                }
            }
            big_a = aa;
        }
    }
    out.big_a = Some(big_a);
    debug_assert!(out.is_complete());
    Ok(out)
}

/// Physical parameters read off the `W` coefficients of the transformed
/// equation (the generic route, independent of the per-member formulas).
#[derive(Debug, Clone, PartialEq)]
pub struct WReadout {
    pub big_a: f64,
    /// `(k, B_k)` for the coefficients carried by `W`.
    pub big_b: PartialB,
    pub epsilon: f64,
}

pub fn constraints_from_w(spec: &PotentialSpec, w: &WCoefficients) -> Result<WReadout> {
    let [w0, w1, w2, w3] = w.re();
    let t = Terms::new(&spec.space, &spec.gauge, spec.n);
    let (a, b1, b2, b3, l, d) = (t.a, t.b1, t.b2, t.b3, t.l, t.d);
    Ok(match spec.family() {
        Family::First => {
            let k = -4.0 * a * a + 8.0 * a * b1 + 2.0 * a * (2.0 * l + d - 1.0) - 2.0 * b1;
            let base = 2.0 * a * (2.0 * a + 1.0);
            let b1_shift = 2.0 * b1 * (4.0 * a - 2.0 * b1 - 2.0 * l - d - 1.0) - 4.0 * b2 * (4.0 * a - 3.0);
            match spec.m() {
                1 => WReadout {
                    big_a: base - w1,
                    big_b: vec![],
                    epsilon: k - w0,
                },
                2 => WReadout {
                    big_a: base - w2,
                    big_b: vec![(1, w0 + b1_shift)],
                    epsilon: k - w1,
                },
                _ => WReadout {
                    big_a: base - w3,
                    big_b: vec![
                        (1, w1 + b1_shift),
                        (
                            2,
                            w0 + 4.0 * b1 * b1
                                + 4.0 * b2 * (4.0 * a - 4.0 * b1 - 2.0 * l - d - 3.0)
                                - 6.0 * b3 * (4.0 * a - 5.0),
                        ),
                    ],
                    epsilon: k - w2,
                },
            }
        }
        Family::Second => {
            let kc = 2.0 * a * (2.0 * a + 1.0) + 2.0 * b1 * (4.0 * a - 2.0 * l - d + 3.0);
            let epsilon = spec
                .epsilon
                .ok_or_else(|| Error::IncompleteSpec("epsilon".into()))?;
            let b1v = w1 + 2.0 * b1 * (4.0 * a + 2.0 * b1 + 3.0) - 4.0 * b2 * (4.0 * a - 2.0 * l - d + 5.0);
            let b2v = w2 - 4.0 * b1 * b1 + 4.0 * b2 * (4.0 * a + 4.0 * b1 + 5.0)
                - 6.0 * b3 * (4.0 * a - 2.0 * l - d + 7.0);
            let big_b = match spec.m() {
                1 => vec![(1, b1v)],
                2 => vec![(1, b1v), (2, b2v)],
                _ => vec![
                    (1, b1v),
                    (2, b2v),
                    (3, w3 - 16.0 * b2 * (b1 - b2) + 6.0 * b3 * (4.0 * a + 4.0 * b1 + 7.0)),
                ],
            };
            WReadout {
                big_a: kc - w0,
                big_b,
                epsilon,
            }
        }
    })
}

/// Coefficients `(p, q)` of the equation for `φ(z)`.
pub fn to_bethe_problem(spec: &PotentialSpec) -> Result<BetheProblem> {
    let t = Terms::new(&spec.space, &spec.gauge, spec.n);
    let (a, b1, b2, b3, l, d) = (t.a, t.b1, t.b2, t.b3, t.l, t.d);
    let (p, q) = match (spec.family(), spec.m()) {
        (Family::First, m) => {
            let c = 4.0 * a - 4.0 * b1 - 2.0 * l - d + 3.0;
            let lead = 2.0 * (4.0 * a + 3.0);
            match m {
                1 => (
                    [0.0, 0.0, -4.0, 4.0, 0.0, 0.0],
                    [-8.0 * b1, -2.0 * c, lead, 0.0, 0.0],
                ),
                2 => (
                    [0.0, 0.0, 0.0, -4.0, 4.0, 0.0],
                    [-16.0 * b2, -8.0 * (b1 - 2.0 * b2), -2.0 * c, lead, 0.0],
                ),
                3 => (
                    [0.0, 0.0, 0.0, 0.0, -4.0, 4.0],
                    [
                        -24.0 * b3,
                        -8.0 * (2.0 * b2 - 3.0 * b3),
                        -8.0 * (b1 - 2.0 * b2),
                        -2.0 * c,
                        lead,
                    ],
                ),
                other => return Err(unsupported_m(other)),
            }
        }
        (Family::Second, m) => {
            let p = [0.0, -4.0, 4.0, 0.0, 0.0, 0.0];
            let q0 = 2.0 * (-4.0 * a + 2.0 * l + d - 3.0);
            let q1 = 2.0 * (4.0 * a + 4.0 * b1 + 3.0);
            let q = match m {
                1 => [q0, q1, -8.0 * b1, 0.0, 0.0],
                2 => [q0, q1, -8.0 * (b1 - 2.0 * b2), -16.0 * b2, 0.0],
                3 => [
                    q0,
                    q1,
                    -8.0 * (b1 - 2.0 * b2),
                    -8.0 * (2.0 * b2 - 3.0 * b3),
                    -24.0 * b3,
                ],
                other => return Err(unsupported_m(other)),
            };
            (p, q)
        }
    };
    BetheProblem::new(p, q, spec.n)
}

fn unsupported_m(m: usize) -> Error {
    Error::UnsupportedCase {
        field: "m",
        value: m.to_string(),
    }
}

/// Potential value at `r` (or `x` when `d = 1`).
pub fn potential_eval(spec: &PotentialSpec, r: f64) -> Result<f64> {
    spec.space.check_coordinate(r)?;
    let (big_a, big_b) = spec.coefficients()?;
    Ok(potential_unchecked(spec.family(), spec.space.lambda(), big_a, &big_b, r))
}

pub(crate) fn potential_unchecked(family: Family, lambda: f64, big_a: f64, big_b: &[f64], r: f64) -> f64 {
    let s = 1.0 + lambda * r * r;
    let base = lambda * big_a - lambda * big_a / s;
    let extra: f64 = match family {
        Family::First => big_b
            .iter()
            .enumerate()
            .map(|(k, bk)| bk * s.powi(k as i32 + 1))
            .sum(),
        Family::Second => big_b
            .iter()
            .enumerate()
            .map(|(k, bk)| bk * s.powi(-(k as i32) - 2))
            .sum(),
    };
    base + lambda * extra
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Normalizability {
    Normalizable { reason: String },
    NotNormalizable { reason: String },
}

impl Normalizability {
    pub fn is_normalizable(&self) -> bool {
        matches!(self, Normalizability::Normalizable { .. })
    }
}

/// Normalizability of the closed-form states with respect to
/// `dμ = (1+λr²)^{−1/2} r^{d−1} dr`.
pub fn normalizability(spec: &PotentialSpec) -> Normalizability {
    let lam = spec.space.lambda();
    let g = &spec.gauge;
    let m = g.m();
    let bm = g.bj(m);
    let (ok, reason) = match (g.family, lam > 0.0) {
        (Family::First, true) => (bm > 0.0, format!("requires b{m} > 0 for lambda > 0 (b{m} = {bm})")),
        (Family::First, false) => {
            let bound = 0.25 - spec.n as f64;
            (
                g.a < bound,
                format!("requires a < 1/4 - n = {bound} for lambda < 0 (a = {})", g.a),
            )
        }
        (Family::Second, true) => {
            let bound = spec.space.l() as f64 + 0.5 * (spec.space.d() as f64 - 1.0);
            (
                2.0 * g.a > bound,
                format!("requires 2a > l + (d-1)/2 = {bound} for lambda > 0 (2a = {})", 2.0 * g.a),
            )
        }
        (Family::Second, false) => (bm > 0.0, format!("requires b{m} > 0 for lambda < 0 (b{m} = {bm})")),
    };
    if ok {
        Normalizability::Normalizable { reason }
    } else {
        Normalizability::NotNormalizable { reason }
    }
}
