//! The exactly solvable oscillator on a space of constant curvature.
//!
//! Units `ħ = 2m = 1`. With `λ = −κ` the radial equation reads
//!
//! ```text
//! −(1+λr²) ψ'' − (d−1+dλr²) ψ'/r + l(l+d−2) ψ/r² + V₀(r) ψ = E ψ,
//! V₀(r) = λA − λA/(1+λr²),   A = (β/λ)(β/λ + 1).
//! ```
//!
//! For `d = 1` the angular number `l` is the parity exponent `p ∈ {0, 1}` and
//! the coordinate runs over a symmetric interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceConfig {
    lambda: f64,
    d: u32,
    l: u32,
}

impl SpaceConfig {
    pub fn new(lambda: f64, d: u32, l: u32) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                field: "lambda",
                reason: format!("must be finite and nonzero, got {lambda}"),
            });
        }
        if d == 0 {
            return Err(Error::InvalidParameter {
                field: "d",
                reason: "dimension must be at least 1".into(),
            });
        }
        if d == 1 && l > 1 {
            return Err(Error::InvalidParameter {
                field: "l",
                reason: format!("for d = 1 the parity exponent must be 0 or 1, got {l}"),
            });
        }
        Ok(Self { lambda, d, l })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Curvature `κ = −λ`.
    pub fn kappa(&self) -> f64 {
        -self.lambda
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Angular quantum number, or the parity exponent when `d = 1`.
    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.d == 1
    }

    /// Upper end of the radial range, `None` when it is unbounded.
    pub fn r_max(&self) -> Option<f64> {
        (self.lambda < 0.0).then(|| 1.0 / (-self.lambda).sqrt())
    }

    pub fn check_coordinate(&self, r: f64) -> Result<()> {
        let lower_ok = if self.d == 1 { r.is_finite() } else { r > 0.0 && r.is_finite() };
        let upper_ok = match self.r_max() {
            Some(rm) => r.abs() < rm && 1.0 + self.lambda * r * r > 0.0,
            None => true,
        };
        if lower_ok && upper_ok {
            Ok(())
        } else {
            Err(Error::DomainError {
                r,
                domain: self.describe_domain(),
            })
        }
    }

    pub fn describe_domain(&self) -> String {
        let hi = self
            .r_max()
            .map_or_else(|| "inf".to_string(), |v| format!("{v}"));
        if self.d == 1 {
            format!("(-{hi}, {hi})")
        } else {
            format!("(0, {hi})")
        }
    }

    /// `z = 1/(1+λr²)`
    pub fn z_of(&self, r: f64) -> f64 {
        1.0 / (1.0 + self.lambda * r * r)
    }

    /// `l(l+d−2)`, zero for both parities when `d = 1`.
    pub fn centrifugal(&self) -> f64 {
        let l = self.l as f64;
        l * (l + self.d as f64 - 2.0)
    }

    /// `l(l+d−1)`
    pub fn angular_shift(&self) -> f64 {
        let l = self.l as f64;
        l * (l + self.d as f64 - 1.0)
    }

    /// Same space with another dimension and angular label.
    pub fn with_dimension(&self, d: u32, l: u32) -> Result<Self> {
        Self::new(self.lambda, d, l)
    }
}

/// Applies the radial operator to a function given by its value and first
/// two derivatives at `r`: returns `Hψ` for potential value `v`.
pub fn radial_operator(space: &SpaceConfig, r: f64, psi: f64, dpsi: f64, ddpsi: f64, v: f64) -> f64 {
    let lam = space.lambda;
    let d = space.d as f64;
    let first = (d - 1.0) / r + d * lam * r;
    -(1.0 + lam * r * r) * ddpsi - first * dpsi + space.centrifugal() / (r * r) * psi + v * psi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    space: SpaceConfig,
    beta: f64,
    big_a: f64,
}

/// Levels admitted by normalizability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelRange {
    Bounded { n_max: usize },
    Unbounded,
}

impl LevelRange {
    pub fn contains(&self, n: usize) -> bool {
        match *self {
            LevelRange::Bounded { n_max } => n <= n_max,
            LevelRange::Unbounded => true,
        }
    }
}

impl OscillatorSpec {
    pub fn new(space: SpaceConfig, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "beta",
                reason: format!("must be positive, got {beta}"),
            });
        }
        let ratio = beta / space.lambda;
        Ok(Self {
            space,
            beta,
            big_a: ratio * (ratio + 1.0),
        })
    }

    pub fn space(&self) -> &SpaceConfig {
        &self.space
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `A = (β/λ)(β/λ + 1)`
    pub fn big_a(&self) -> f64 {
        self.big_a
    }

    pub fn v0(&self, r: f64) -> Result<f64> {
        self.space.check_coordinate(r)?;
        Ok(v0_eval(self.space.lambda, self.big_a, r))
    }

    pub fn allowed_levels(&self) -> Result<LevelRange> {
        let lam = self.space.lambda;
        if lam < 0.0 {
            return Ok(LevelRange::Unbounded);
        }
        let d = self.space.d as f64;
        let ratio = self.beta / lam;
        // The window [β/λ − (d+1)/2, β/λ − (d−1)/2) holds exactly one integer.
        let n_max = (ratio - 0.5 * (d + 1.0)).ceil();
        if n_max < 0.0 {
            return Err(Error::EmptySpectrum {
                ratio,
                d: self.space.d,
            });
        }
        Ok(LevelRange::Bounded {
            n_max: n_max as usize,
        })
    }

    /// `E_n = β(2n+d) − λ n(n+d−1)`
    pub fn energy(&self, n: usize) -> Result<f64> {
        if let LevelRange::Bounded { n_max } = self.allowed_levels()? {
            if n > n_max {
                return Err(Error::LevelOutOfRange { n, n_max });
            }
        }
        let nf = n as f64;
        let d = self.space.d as f64;
        Ok(self.beta * (2.0 * nf + d) - self.space.lambda * nf * (nf + d - 1.0))
    }

    fn check_level(&self, n_r: usize) -> Result<()> {
        let n = 2 * n_r + self.space.l as usize;
        if let LevelRange::Bounded { n_max } = self.allowed_levels()? {
            if n > n_max {
                return Err(Error::LevelOutOfRange { n, n_max });
            }
        }
        Ok(())
    }

    fn jacobi_params(&self) -> (f64, f64) {
        let l = self.space.l as f64;
        let d = self.space.d as f64;
        (l + 0.5 * (d - 2.0), -self.beta / self.space.lambda - 0.5)
    }

    /// Unnormalized `r^l (1+λr²)^{−β/(2λ)} P_{n_r}^{(l+(d−2)/2, −β/λ−1/2)}(1+2λr²)`.
    pub fn wavefunction(&self, n_r: usize, r: f64) -> Result<f64> {
        Ok(self.wavefunction_with_derivatives(n_r, r)?.0)
    }

    /// Value and first two radial derivatives of [`Self::wavefunction`].
    pub fn wavefunction_with_derivatives(&self, n_r: usize, r: f64) -> Result<(f64, f64, f64)> {
        self.space.check_coordinate(r)?;
        self.check_level(n_r)?;
        let lam = self.space.lambda;
        let l = self.space.l as i32;
        let s = 1.0 + lam * r * r;
        let (alpha, beta_j) = self.jacobi_params();
        let x = 1.0 + 2.0 * lam * r * r;
        let (jac, djac, ddjac) = special::jacobi_with_derivatives(n_r, alpha, beta_j, x);
        let prefactor = r.powi(l) * s.powf(-self.beta / (2.0 * lam));
        let psi = prefactor * jac;
        if r == 0.0 {
            return Ok((psi, f64::NAN, f64::NAN));
        }
        let lf = l as f64;
        let dlog = lf / r - self.beta * r / s;
        let ddlog = -lf / (r * r) - self.beta * (1.0 - lam * r * r) / (s * s);
        let dx = 4.0 * lam * r;
        let j_r = djac * dx;
        let j_rr = ddjac * dx * dx + djac * 4.0 * lam;
        let dpsi = prefactor * (dlog * jac + j_r);
        let ddpsi = prefactor * ((ddlog + dlog * dlog) * jac + 2.0 * dlog * j_r + j_rr);
        Ok((psi, dpsi, ddpsi))
    }
}

/// `V₀(r) = λA − λA/(1+λr²)` without domain checks.
pub fn v0_eval(lambda: f64, big_a: f64, r: f64) -> f64 {
    lambda * big_a - lambda * big_a / (1.0 + lambda * r * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(lambda: f64, d: u32, l: u32, beta: f64) -> OscillatorSpec {
        OscillatorSpec::new(SpaceConfig::new(lambda, d, l).unwrap(), beta).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(SpaceConfig::new(0.0, 3, 0).is_err());
        assert!(SpaceConfig::new(1.0, 1, 2).is_err());
        assert!(SpaceConfig::new(1.0, 0, 0).is_err());
        let s = SpaceConfig::new(-4.0, 3, 1).unwrap();
        assert_eq!(s.r_max(), Some(0.5));
        assert!(s.check_coordinate(0.5).is_err());
        assert!(s.check_coordinate(-0.1).is_err());
        assert!(s.check_coordinate(0.49).is_ok());
        let line = SpaceConfig::new(-4.0, 1, 1).unwrap();
        assert!(line.check_coordinate(-0.49).is_ok());
    }

    #[test]
    fn potential_values() {
        assert_eq!(v0_eval(1.0, 2.0, 0.0), 0.0);
        assert_eq!(v0_eval(1.0, 2.0, 1.0), 1.0);
        assert!((v0_eval(-1.0, 2.0, 0.5) - 2.0 / 3.0).abs() < 1e-15);
        let s = spec(-1.0, 3, 0, 2.0);
        assert!(s.v0(1.0).is_err());
    }

    #[test]
    fn a_and_beta_consistent() {
        let s = spec(0.7, 3, 0, 2.1);
        let ratio = 2.1 / 0.7;
        assert!((s.big_a() - ratio * (ratio + 1.0)).abs() <= 1e-12 * s.big_a());
    }

    #[test]
    fn energies() {
        let s = spec(1.0, 3, 0, 5.0);
        assert_eq!(s.energy(0).unwrap(), 15.0);
        // one-dimensional form β(2n+1) − λn²
        let line = spec(-0.5, 1, 0, 1.3);
        for n in 0..6 {
            let nf = n as f64;
            let e = 1.3 * (2.0 * nf + 1.0) + 0.5 * nf * nf;
            assert!((line.energy(n).unwrap() - e).abs() < 1e-13);
        }
        assert!(matches!(
            s.energy(4),
            Err(Error::LevelOutOfRange { n: 4, n_max: 3 })
        ));
    }

    #[test]
    fn level_window() {
        assert_eq!(
            spec(1.0, 3, 0, 5.0).allowed_levels().unwrap(),
            LevelRange::Bounded { n_max: 3 }
        );
        assert_eq!(
            spec(-1.0, 3, 0, 5.0).allowed_levels().unwrap(),
            LevelRange::Unbounded
        );
        assert!(matches!(
            spec(1.0, 3, 0, 0.4).allowed_levels(),
            Err(Error::EmptySpectrum { .. })
        ));
        // β/λ − (d+1)/2 an integer: the left end is included.
        assert_eq!(
            spec(2.0, 1, 0, 6.0).allowed_levels().unwrap(),
            LevelRange::Bounded { n_max: 2 }
        );
        // just below an integer on the right end
        assert_eq!(
            spec(1.0, 1, 0, 2.999).allowed_levels().unwrap(),
            LevelRange::Bounded { n_max: 2 }
        );
    }

    #[test]
    fn ground_state_is_pure_power() {
        let s = spec(0.8, 3, 0, 2.0);
        for &r in &[0.1_f64, 0.7, 2.0] {
            let expect = (1.0 + 0.8 * r * r).powf(-2.0 / 1.6);
            assert!((s.wavefunction(0, r).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenfunction_residual() {
        for &(lam, beta) in &[(-1.0, 3.0), (0.5, 6.0), (-0.3, 1.1)] {
            for d in 1..=4u32 {
                let lmax = if d == 1 { 1 } else { 3 };
                for l in 0..=lmax {
                    let s = spec(lam, d, l, beta);
                    for n_r in 0..=3usize {
                        let n = 2 * n_r + l as usize;
                        if n > 6 || !s.allowed_levels().unwrap().contains(n) {
                            continue;
                        }
                        let e = s.energy(n).unwrap();
                        let r_hi = s.space().r_max().map_or(4.0, |m| 0.98 * m);
                        let mut max_res = 0.0_f64;
                        let mut max_psi = 0.0_f64;
                        for k in 1..200 {
                            let r = r_hi * k as f64 / 200.0;
                            let (p, dp, ddp) = s.wavefunction_with_derivatives(n_r, r).unwrap();
                            let v = v0_eval(lam, s.big_a(), r);
                            let h = radial_operator(s.space(), r, p, dp, ddp, v);
                            max_res = max_res.max((h - e * p).abs());
                            max_psi = max_psi.max(p.abs());
                        }
                        let rel = max_res / ((1.0 + e.abs()) * max_psi);
                        assert!(rel < 1e-8, "lam={lam} d={d} l={l} n_r={n_r}: {rel:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn nodes_equal_radial_quantum_number() {
        let s = spec(-1.0, 3, 1, 4.0);
        let rm = s.space().r_max().unwrap();
        for n_r in 0..5 {
            let vals: Vec<f64> = (1..2000)
                .map(|k| s.wavefunction(n_r, rm * k as f64 / 2000.0).unwrap())
                .collect();
            let changes = vals.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
            assert_eq!(changes, n_r);
        }
    }

    #[test]
    fn jacobi_matches_gegenbauer_on_the_line() {
        // λ < 0, d = 1: ψ_n ∝ (1−|λ|x²)^{β/(2|λ|)} C_n^{(β/|λ|)}(√|λ| x)
        let lam: f64 = -0.8;
        let beta = 1.7;
        for n in 0..=5usize {
            let p = (n % 2) as u32;
            let s = spec(lam, 1, p, beta);
            let n_r = (n - p as usize) / 2;
            let ratios: Vec<f64> = (1..=20)
                .map(|k| {
                    let x = 0.95 * (k as f64 / 21.0 - 0.5) * 2.0 / (-lam).sqrt();
                    let ours = s.wavefunction(n_r, x).unwrap();
                    let geg = (1.0 + lam * x * x).powf(beta / (2.0 * -lam))
                        * special::gegenbauer(n, beta / -lam, (-lam).sqrt() * x);
                    ours / geg
                })
                .collect();
            let r0 = ratios[0];
            for r in &ratios {
                assert!((r - r0).abs() <= 1e-9 * r0.abs(), "n={n}: {ratios:?}");
            }
        }
    }
}
