//! Hidden sl(2,R) structure of the first member of each family.
//!
//! On polynomials of degree at most `n` the generators act as
//! `J⁺ = z² d/dz − n z`, `J⁰ = z d/dz − n/2`, `J⁻ = d/dz`. The
//! `φ`-equation of the first family is an eigenproblem for `ε`, that of the
//! second family an eigenproblem for `A`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::families::{to_bethe_problem, Family, GaugeParams, PotentialSpec};
use crate::fba::{self, BetheRoots, SolveOptions};
use crate::oscillator::SpaceConfig;

/// Matrices of the generators in the monomial basis `(1, z, …, zⁿ)`;
/// column `k` holds the image of `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Rep {
    n: usize,
    pub jp: DMatrix<f64>,
    pub j0: DMatrix<f64>,
    pub jm: DMatrix<f64>,
}

impl Sl2Rep {
    pub fn new(n: usize) -> Self {
        let dim = n + 1;
        let nf = n as f64;
        let mut jp = DMatrix::zeros(dim, dim);
        let mut j0 = DMatrix::zeros(dim, dim);
        let mut jm = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let kf = k as f64;
            if k < n {
                jp[(k + 1, k)] = kf - nf;
            }
            j0[(k, k)] = kf - nf / 2.0;
            if k > 0 {
                jm[(k - 1, k)] = kf;
            }
        }
        Self { n, jp, j0, jm }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `([J⁰,J⁺] − J⁺, [J⁰,J⁻] + J⁻, [J⁺,J⁻] + 2J⁰)`, all zero for a
    /// representation.
    pub fn commutator_defects(&self) -> [DMatrix<f64>; 3] {
        let comm = |x: &DMatrix<f64>, y: &DMatrix<f64>| x * y - y * x;
        [
            comm(&self.j0, &self.jp) - &self.jp,
            comm(&self.j0, &self.jm) + &self.jm,
            comm(&self.jp, &self.jm) + &self.j0 * 2.0,
        ]
    }
}

/// Operator whose eigenvalues are the admissible `ε` of the first family,
/// `m = 1`.
pub fn family1_operator_matrix(n: usize, a: f64, b1: f64, l: u32, d: u32) -> DMatrix<f64> {
    let r = Sl2Rep::new(n);
    let nf = n as f64;
    let (l, d) = (l as f64, d as f64);
    let c = 4.0 * a - 4.0 * b1 - 2.0 * l - d + 3.0;
    let scalar = -4.0 * a * a + 8.0 * a * b1 + 2.0 * a * (2.0 * l + d - 1.0) - 2.0 * b1 - nf * (c + 2.0 * nf);
    &r.jp * &r.j0 * 4.0 - &r.jp * &r.jm * 4.0 + &r.jp * (2.0 * (4.0 * a + 1.0 + 3.0 * nf))
        - &r.j0 * (2.0 * (c + 2.0 * nf))
        - &r.jm * (8.0 * b1)
        + DMatrix::identity(n + 1, n + 1) * scalar
}

/// Operator whose eigenvalues are the admissible `A` of the second family,
/// `m = 1`.
pub fn family2_operator_matrix(n: usize, a: f64, b1: f64, l: u32, d: u32) -> DMatrix<f64> {
    let r = Sl2Rep::new(n);
    let nf = n as f64;
    let (l, d) = (l as f64, d as f64);
    let f = 4.0 * a + 4.0 * b1 + 3.0;
    let scalar = 2.0 * a * (2.0 * a + 1.0) + 2.0 * b1 * (4.0 * a - 2.0 * l - d + 3.0) + nf * (f + 2.0 * nf);
    &r.jp * &r.jm * 4.0 - &r.j0 * &r.jm * 4.0 - &r.jp * (8.0 * b1) + &r.j0 * (2.0 * (f + 2.0 * nf))
        - &r.jm * (2.0 * (4.0 * a - 2.0 * l - d + 3.0 + nf))
        + DMatrix::identity(n + 1, n + 1) * scalar
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrossCheckFlag {
    /// The operator has non-real eigenvalues.
    ComplexPair,
    /// Fewer real Bethe configurations than real eigenvalues.
    MissingBetheSolution { real_eigenvalues: usize, real_configurations: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub family: Family,
    pub n: usize,
    /// Operator eigenvalues, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// `ε` (first family) or `A` (second family) from every Bethe
    /// configuration found, real and complex.
    pub bethe_values: Vec<Complex64>,
    /// Largest `|λ_sl2 − λ_Bethe| / max(1, |λ|)` over matched pairs.
    pub eigenvalue_discrepancy: f64,
    /// Largest sine of the angle between an eigenvector and the coefficient
    /// vector of `∏(z − z_i)` over matched pairs.
    pub eigenvector_discrepancy: f64,
    pub matched: usize,
    pub flags: Vec<CrossCheckFlag>,
}

impl CrossCheckReport {
    /// Eigenvalue multisets coincide within `tol`.
    pub fn multisets_match(&self, tol: f64) -> bool {
        self.matched == self.eigenvalues.len()
            && self.matched == self.bethe_values.len()
            && self.eigenvalue_discrepancy < tol
    }
}

const IMAG_TOL: f64 = 1e-9;

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
}

/// Unit vector spanning the numerical null space of `M − μ`.
fn null_vector(m: &DMatrix<f64>, mu: Complex64) -> Vec<Complex64> {
    let dim = m.nrows();
    let shifted = DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(m[(i, j)], 0.0) - if i == j { mu } else { Complex64::new(0.0, 0.0) }
    });
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    (0..dim).map(|j| v_t[(idx, j)].conj()).collect()
}

/// Sine of the angle between two complex vectors.
fn angle_sine(x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx: f64 = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ny: f64 = y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return 1.0;
    }
    let dot: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    let cos = (dot.norm() / (nx * ny)).min(1.0);
    (1.0 - cos * cos).max(0.0).sqrt()
}

/// Compares the operator eigenpairs with all Bethe configurations of degree
/// `n` for the first member (`m = 1`) of `family`.
pub fn cross_check(family: Family, n: usize, a: f64, b1: f64, l: u32, d: u32) -> Result<CrossCheckReport> {
    let matrix = match family {
        Family::First => family1_operator_matrix(n, a, b1, l, d),
        Family::Second => family2_operator_matrix(n, a, b1, l, d),
    };
    let mut eigenvalues: Vec<Complex64> = matrix.clone().complex_eigenvalues().iter().copied().collect();
    sort_complex(&mut eigenvalues);

    let space = SpaceConfig::new(1.0, d, l)?;
    let spec = PotentialSpec::new(space, GaugeParams::new(family, a, vec![b1])?, n)?;
    let prob = to_bethe_problem(&spec)?;
    let opts = SolveOptions {
        include_complex: true,
        ..SolveOptions::default()
    };
    let configs = match fba::solve_roots_with(&prob, &opts) {
        Ok(c) => c,
        Err(crate::Error::NoRealSolution) | Err(crate::Error::NonConvergence { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };

    let (l_f, d_f) = (l as f64, d as f64);
    let mut bethe: Vec<(Complex64, Vec<Complex64>, bool)> = Vec::new();
    for cfg in &configs {
        let w = fba::derive_w(&prob, cfg)?.w;
        let value = match family {
            Family::First => {
                let k = -4.0 * a * a + 8.0 * a * b1 + 2.0 * a * (2.0 * l_f + d_f - 1.0) - 2.0 * b1;
                Complex64::new(k, 0.0) - w[0]
            }
            Family::Second => {
                let kc = 2.0 * a * (2.0 * a + 1.0) + 2.0 * b1 * (4.0 * a - 2.0 * l_f - d_f + 3.0);
                Complex64::new(kc, 0.0) - w[0]
            }
        };
        bethe.push((value, cfg.polynomial(), cfg.is_real()));
    }

    let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::new();
    let vectors: Vec<Vec<Complex64>> = eigenvalues.iter().map(|&mu| null_vector(&matrix, mu)).collect();
    for (i, mu) in eigenvalues.iter().enumerate() {
        for (j, (val, poly, _)) in bethe.iter().enumerate() {
            let dist = (mu - val).norm() / mu.norm().max(1.0);
            pairs.push((dist, angle_sine(&vectors[i], poly), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut used_e = vec![false; eigenvalues.len()];
    let mut used_b = vec![false; bethe.len()];
    let (mut ev_disc, mut vec_disc, mut matched) = (0.0_f64, 0.0_f64, 0);
    for (dist, sine, i, j) in pairs {
        if used_e[i] || used_b[j] {
            continue;
        }
        used_e[i] = true;
        used_b[j] = true;
        matched += 1;
        ev_disc = ev_disc.max(dist);
        vec_disc = vec_disc.max(sine);
    }

    let mut flags = Vec::new();
    let real_eigs = eigenvalues
        .iter()
        .filter(|z| z.im.abs() <= IMAG_TOL * z.norm().max(1.0))
        .count();
    if real_eigs < eigenvalues.len() {
        flags.push(CrossCheckFlag::ComplexPair);
    }
    let real_cfgs = bethe.iter().filter(|b| b.2).count();
    if real_cfgs < real_eigs {
        flags.push(CrossCheckFlag::MissingBetheSolution {
            real_eigenvalues: real_eigs,
            real_configurations: real_cfgs,
        });
    }
    let mut bethe_values: Vec<Complex64> = bethe.into_iter().map(|b| b.0).collect();
    sort_complex(&mut bethe_values);

    Ok(CrossCheckReport {
        family,
        n,
        eigenvalues,
        bethe_values,
        eigenvalue_discrepancy: ev_disc,
        eigenvector_discrepancy: vec_disc,
        matched,
        flags,
    })
}

/// Convenience: real Bethe roots of the first-member problem.
pub fn bethe_configurations(family: Family, n: usize, a: f64, b1: f64, l: u32, d: u32) -> Result<Vec<BetheRoots>> {
    let space = SpaceConfig::new(1.0, d, l)?;
    let spec = PotentialSpec::new(space, GaugeParams::new(family, a, vec![b1])?, n)?;
    fba::solve_roots(&to_bethe_problem(&spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family_root_constraints;
    use crate::spectrum::assemble_state;

    #[test]
    fn generator_entries() {
        let r = Sl2Rep::new(3);
        assert_eq!(r.jp[(1, 0)], -3.0);
        assert_eq!(r.jp[(3, 2)], -1.0);
        assert_eq!(r.j0[(0, 0)], -1.5);
        assert_eq!(r.jm[(2, 3)], 3.0);
        assert_eq!(r.jp.column(3).iter().filter(|x| **x != 0.0).count(), 0);
    }

    #[test]
    fn commutators_exact() {
        for n in 0..=12 {
            for defect in Sl2Rep::new(n).commutator_defects() {
                assert!(defect.iter().all(|x| *x == 0.0), "n = {n}");
            }
        }
    }

    #[test]
    fn ground_values() {
        let (a, b1, l, d) = (0.7, 1.3, 1u32, 3u32);
        let (lf, df) = (l as f64, d as f64);
        let m1 = family1_operator_matrix(0, a, b1, l, d);
        let eps = -4.0 * a * a + 8.0 * a * b1 + 2.0 * a * (2.0 * lf + df - 1.0) - 2.0 * b1;
        assert!((m1[(0, 0)] - eps).abs() < 1e-14);
        let m2 = family2_operator_matrix(0, a, b1, l, d);
        let big_a = 2.0 * a * (2.0 * a + 1.0) + 2.0 * b1 * (4.0 * a - 2.0 * lf - df + 3.0);
        assert!((m2[(0, 0)] - big_a).abs() < 1e-14);
    }

    #[test]
    fn first_family_pair_matches_branches() {
        let (a, b1, l, d) = (0.5, 1.0, 0, 3);
        let report = cross_check(Family::First, 1, a, b1, l, d).unwrap();
        assert!(report.multisets_match(1e-10), "{report:?}");
        assert!(report.eigenvector_discrepancy < 1e-9);
        // energies of the two branches
        let space = SpaceConfig::new(1.0, d, l).unwrap();
        let spec = PotentialSpec::new(space, GaugeParams::new(Family::First, a, vec![b1]).unwrap(), 1).unwrap();
        for roots in bethe_configurations(Family::First, 1, a, b1, l, d).unwrap() {
            let st = assemble_state(&spec, &roots).unwrap();
            let big_a = st.spec().big_a().unwrap();
            let eps = st.energy() - big_a + space.angular_shift();
            assert!(report.eigenvalues.iter().any(|e| (e.re - eps).abs() < 1e-10 * eps.abs().max(1.0)));
        }
    }

    #[test]
    fn second_family_a_values() {
        let (a, b1, l, d) = (0.9, 0.6, 1, 3);
        let report = cross_check(Family::Second, 1, a, b1, l, d).unwrap();
        assert!(report.multisets_match(1e-10), "{report:?}");
        let space = SpaceConfig::new(1.0, d, l).unwrap();
        let spec = PotentialSpec::new(space, GaugeParams::new(Family::Second, a, vec![b1]).unwrap(), 1).unwrap();
        for roots in bethe_configurations(Family::Second, 1, a, b1, l, d).unwrap() {
            let done = family_root_constraints(&spec, &roots).unwrap();
            let big_a = done.big_a().unwrap();
            assert!(report.eigenvalues.iter().any(|e| (e.re - big_a).abs() < 1e-10 * big_a.abs().max(1.0)));
        }
    }

    #[test]
    fn complex_pair_flagged() {
        // Δ² < 0 for the first family at n = 1
        let (a, b1, l, d) = (0.5, -1.0, 0, 3);
        let report = cross_check(Family::First, 1, a, b1, l, d).unwrap();
        assert!(report.flags.contains(&CrossCheckFlag::ComplexPair), "{report:?}");
        assert!(report.multisets_match(1e-9));
    }

    #[test]
    fn second_family_without_b1_is_triangular() {
        let (a, l, d) = (0.8, 0, 3);
        let m = family2_operator_matrix(3, a, 0.0, l, d);
        let mut diag: Vec<f64> = (0..4).map(|k| m[(k, k)]).collect();
        diag.sort_by(f64::total_cmp);
        let report = cross_check(Family::Second, 3, a, 0.0, l, d).unwrap();
        let mut eig: Vec<f64> = report.eigenvalues.iter().map(|z| z.re).collect();
        eig.sort_by(f64::total_cmp);
        for (x, y) in diag.iter().zip(&eig) {
            assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }
}
