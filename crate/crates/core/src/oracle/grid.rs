use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::SpaceConfig;

/// Radial evaluation grid on the open domain.
///
/// Nodes never touch `r = 0` or the endpoint `1/√|λ|`. For `λ < 0` they follow
/// `r = R (t − c sin(2πt)/2π)`, which bunches points at both ends; for `λ > 0`
/// they follow `r = r_hi (e^{κt} − 1)/(e^κ − 1)` with `κ = 10c`, bunching
/// points near the origin. `t` runs uniformly over `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    points: usize,
    clustering: f64,
    extent: f64,
    bounded: bool,
    symmetric: bool,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 2001;
    pub const MIN_POINTS: usize = 201;
    pub const DEFAULT_CLUSTERING: f64 = 0.9;

    pub fn new(space: &SpaceConfig, points: usize) -> Result<Self> {
        if points < Self::MIN_POINTS {
            return Err(Error::InvalidParameter {
                field: "grid_points",
                reason: format!("need at least {} points, got {points}", Self::MIN_POINTS),
            });
        }
        let (extent, bounded) = match space.r_max() {
            Some(rm) => (rm, true),
            None => (30.0 / space.lambda().sqrt(), false),
        };
        Ok(Self {
            points,
            clustering: Self::DEFAULT_CLUSTERING,
            extent,
            bounded,
            symmetric: space.is_one_dimensional(),
        })
    }

    pub fn default_for(space: &SpaceConfig) -> Self {
        Self::new(space, Self::DEFAULT_POINTS).expect("default point count is valid")
    }

    pub fn with_clustering(mut self, c: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&c) {
            return Err(Error::InvalidParameter {
                field: "clustering",
                reason: format!("must lie in [0, 1), got {c}"),
            });
        }
        self.clustering = c;
        Ok(self)
    }

    /// Outer radius for unbounded domains.
    pub fn with_extent(mut self, r_hi: f64) -> Result<Self> {
        if self.bounded || !(r_hi > 0.0 && r_hi.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "extent",
                reason: "only a positive finite extent on an unbounded domain can be set".into(),
            });
        }
        self.extent = r_hi;
        Ok(self)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn clustering(&self) -> f64 {
        self.clustering
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Whether the domain is the symmetric line (`d = 1`).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Positive radial nodes, strictly increasing.
    pub fn nodes(&self) -> Vec<f64> {
        let m = self.points;
        let c = self.clustering;
        (1..=m)
            .map(|i| {
                let t = i as f64 / (m + 1) as f64;
                if self.bounded {
                    let tau = std::f64::consts::TAU;
                    self.extent * (t - c * (tau * t).sin() / tau)
                } else {
                    let kappa = 10.0 * c;
                    if kappa == 0.0 {
                        self.extent * t
                    } else {
                        self.extent * (kappa * t).exp_m1() / kappa.exp_m1()
                    }
                }
            })
            .collect()
    }

    /// Nodes on the full line for `d = 1` (mirrored, origin excluded),
    /// otherwise the radial nodes.
    pub fn evaluation_nodes(&self) -> Vec<f64> {
        let pos = self.nodes();
        if !self.symmetric {
            return pos;
        }
        let mut all: Vec<f64> = pos.iter().rev().map(|r| -r).collect();
        all.extend(pos);
        all
    }
}

/// Density of `dμ = (1+λr²)^{−1/2} r^{d−1} dr`.
pub fn measure_density(space: &SpaceConfig, r: f64) -> f64 {
    let s = 1.0 + space.lambda() * r * r;
    r.abs().powi(space.d() as i32 - 1) / s.sqrt()
}
