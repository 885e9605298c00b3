#![allow(dead_code)]

use qes_core::families::{Family, GaugeParams, PotentialSpec};
use qes_core::oscillator::SpaceConfig;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.5) { 1.0 } else { -1.0 }
}

/// `(d, l)` with `d ∈ 1..=4`; `l` is the parity exponent for `d = 1`.
/// `d = 2, l = 0` is skipped when `regular_origin` is set: there
/// `χ = r^{1/2}ψ` is not smooth at the origin and the finite-difference
/// oracle loses its second order.
pub fn dims(rng: &mut ChaCha8Rng, regular_origin: bool) -> (u32, u32) {
    loop {
        let d = rng.random_range(1..=4u32);
        let l = if d == 1 { rng.random_range(0..=1u32) } else { rng.random_range(0..=2u32) };
        if !(regular_origin && d == 2 && l == 0) {
            return (d, l);
        }
    }
}

pub fn spec(family: Family, lam: f64, d: u32, l: u32, a: f64, b: Vec<f64>, n: usize) -> PotentialSpec {
    PotentialSpec::new(
        SpaceConfig::new(lam, d, l).unwrap(),
        GaugeParams::new(family, a, b).unwrap(),
        n,
    )
    .unwrap()
}

fn b_list(rng: &mut ChaCha8Rng, m: usize, lower: (f64, f64), top: (f64, f64)) -> Vec<f64> {
    (1..=m)
        .map(|j| if j == m { uniform(rng, top.0, top.1) } else { uniform(rng, lower.0, lower.1) })
        .collect()
}

/// A spec whose closed-form states are normalizable by the printed
/// conditions.
pub fn normalizable_spec(rng: &mut ChaCha8Rng, family: Family, m: usize, n: usize) -> PotentialSpec {
    let lam = sign(rng) * uniform(rng, 0.3, 2.0);
    let (d, l) = dims(rng, false);
    let nf = n as f64;
    let (a, b) = match (family, lam > 0.0) {
        (Family::First, true) => (uniform(rng, -1.0, 2.0), b_list(rng, m, (-1.0, 1.0), (0.1, 1.5))),
        (Family::First, false) => (uniform(rng, -nf - 2.0, 0.2 - nf), b_list(rng, m, (-1.0, 1.0), (-1.0, 1.0))),
        (Family::Second, true) => {
            let lo = 0.5 * (l as f64 + 0.5 * (d as f64 - 1.0)) + 0.02;
            (uniform(rng, lo, lo + 1.5), b_list(rng, m, (-1.0, 1.0), (-1.0, 1.0)))
        }
        (Family::Second, false) => (uniform(rng, -1.0, 2.0), b_list(rng, m, (-1.0, 1.0), (0.1, 1.5))),
    };
    spec(family, lam, d, l, a, b, n)
}

/// Normalizable spec inside the region where the finite-difference oracle
/// converges at second order: the closed-form state must be the one
/// selected by a Dirichlet end on the sphere, and on the hyperboloid the
/// second family must decay clearly faster than the continuum edge.
pub fn fd_spec(rng: &mut ChaCha8Rng, family: Family, m: usize, n: usize) -> PotentialSpec {
    let lam = sign(rng) * uniform(rng, 0.5, 1.5);
    let (d, l) = dims(rng, true);
    let nf = n as f64;
    let (a, b) = match (family, lam > 0.0) {
        (Family::First, true) => (uniform(rng, -0.5, 1.5), b_list(rng, m, (0.0, 0.8), (0.2, 1.0))),
        (Family::First, false) => (uniform(rng, -nf - 2.0, -nf - 1.0), b_list(rng, m, (-0.6, 0.6), (-0.6, 0.6))),
        (Family::Second, true) => {
            let lo = 0.5 * (l as f64 + 0.5 * (d as f64 - 1.0) + 0.8);
            (uniform(rng, lo, lo + 1.0), b_list(rng, m, (-0.5, 0.8), (-0.5, 0.8)))
        }
        (Family::Second, false) => (uniform(rng, -0.5, 1.5), b_list(rng, m, (-0.5, 0.8), (0.2, 1.0))),
    };
    spec(family, lam, d, l, a, b, n)
}
