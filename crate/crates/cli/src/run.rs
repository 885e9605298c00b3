//! Solve, verify and sweep tasks.

use qes_core::fba::SolveOptions;
use qes_core::oracle::{fd_eigensolve, ode_residual, GridSpec};
use qes_core::spectrum::{node_count, solve_states_with, SolvedState};
use qes_core::Error as CoreError;
use rayon::prelude::*;

use crate::config::{Axis, ConfigError, ConfigResult, GridConfig, SpecParams};
use crate::record::{ComplexRecord, FailureRecord, Gate, Params, Record, StateRecord, Verification};

/// Number of finite-difference levels compared against each state.
const FD_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub residual: f64,
    pub fd_raw: f64,
    pub fd_richardson: f64,
}

impl Tolerances {
    pub const DEFAULT: Self = Self {
        residual: 1e-8,
        fd_raw: 1e-3,
        fd_richardson: 1e-4,
    };
    pub const STRICT: Self = Self {
        residual: 1e-10,
        fd_raw: 1e-4,
        fd_richardson: 1e-5,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub emit_complex: bool,
    pub verify: bool,
}

fn grid_for(state: &SolvedState, cfg: &GridConfig) -> qes_core::Result<GridSpec> {
    let space = state.spec().space();
    let mut grid = GridSpec::new(space, cfg.points.unwrap_or(GridSpec::DEFAULT_POINTS))?;
    if let Some(c) = cfg.clustering {
        grid = grid.with_clustering(c)?;
    }
    if let Some(e) = cfg.extent {
        grid = grid.with_extent(e)?;
    }
    Ok(grid)
}

/// Checks the grid settings once against `spec` so that bad values are
/// reported as config errors.
pub fn validate_grid(params: &SpecParams, cfg: &GridConfig) -> ConfigResult<()> {
    let spec = params.build("spec")?;
    let space = spec.space();
    let at = |field: &'static str| move |e: CoreError| ConfigError::new(format!("grid.{field}"), e.to_string());
    let grid = GridSpec::new(space, cfg.points.unwrap_or(GridSpec::DEFAULT_POINTS)).map_err(at("points"))?;
    if let Some(c) = cfg.clustering {
        grid.with_clustering(c).map_err(at("clustering"))?;
    }
    if let Some(e) = cfg.extent {
        grid.with_extent(e).map_err(at("extent"))?;
    }
    Ok(())
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn verify_state(state: &SolvedState, grid: &GridSpec, residual: Option<f64>, tol: &Tolerances) -> Verification {
    let mut gates = vec![Gate {
        name: "residual".into(),
        value: residual,
        limit: tol.residual,
        passed: residual.is_some_and(|r| r < tol.residual),
        note: None,
    }];
    let nodes = node_count(state, grid);
    gates.push(Gate {
        name: "node_count".into(),
        value: nodes.as_ref().ok().map(|&k| k as f64),
        limit: state.nodes() as f64,
        passed: nodes.as_ref().is_ok_and(|&k| k == state.nodes()),
        note: nodes.err().map(|e| e.to_string()),
    });
    let lam = state.spec().space().lambda();
    let (fd_energy, threshold) = match fd_eigensolve(state.spec(), grid, FD_LEVELS) {
        Ok(fd) => {
            let raw = fd.relative_match(state.energy(), lam, false);
            let rich = fd.relative_match(state.energy(), lam, true);
            let nearest = fd
                .eigenvalues
                .iter()
                .copied()
                .min_by(|x, y| (x - state.energy()).abs().total_cmp(&(y - state.energy()).abs()));
            gates.push(Gate {
                name: "fd_raw".into(),
                value: finite(raw),
                limit: tol.fd_raw,
                passed: raw < tol.fd_raw,
                note: None,
            });
            gates.push(Gate {
                name: "fd_richardson".into(),
                value: finite(rich),
                limit: tol.fd_richardson,
                passed: rich < tol.fd_richardson,
                note: None,
            });
            (nearest, fd.threshold)
        }
        Err(e) => {
            for (name, limit) in [("fd_raw", tol.fd_raw), ("fd_richardson", tol.fd_richardson)] {
                gates.push(Gate {
                    name: name.into(),
                    value: None,
                    limit,
                    passed: false,
                    note: Some(e.to_string()),
                });
            }
            (None, None)
        }
    };
    Verification {
        grid_points: grid.points(),
        fd_energy,
        threshold,
        gates,
    }
}

fn state_record(params: &Params, state: &SolvedState, opts: &RunOptions) -> Record {
    let spec = state.spec();
    let (big_a, big_b) = spec.coefficients().expect("solved specs are complete");
    let grid = grid_for(state, &opts.grid);
    let residual = grid.as_ref().ok().and_then(|g| ode_residual(state, g).ok()).and_then(finite);
    let verification = match (&grid, opts.verify && state.normalizable()) {
        (Ok(g), true) => Some(verify_state(state, g, residual, &opts.tolerances)),
        _ => None,
    };
    Record::State(StateRecord {
        params: params.clone(),
        big_a,
        big_b,
        epsilon: state.epsilon(),
        roots: state.real_roots(),
        energy: state.energy(),
        normalizable: state.normalizable(),
        normalizability: match state.normalizability() {
            qes_core::families::Normalizability::Normalizable { reason } => reason.clone(),
            qes_core::families::Normalizability::NotNormalizable { reason } => reason.clone(),
        },
        nodes: state.nodes(),
        residual,
        verification,
    })
}

/// Records for one spec: one per state, plus complex configurations when
/// requested. Solver failures become failure records.
pub fn solve_point(sp: &SpecParams, opts: &RunOptions) -> ConfigResult<Vec<Record>> {
    let spec = sp.build("spec")?;
    let params = Params::from(sp);
    let solve_opts = SolveOptions {
        include_complex: opts.emit_complex,
        ..SolveOptions::default()
    };
    let outcome = match solve_states_with(&spec, &solve_opts) {
        Ok(o) => o,
        Err(e @ (CoreError::NoRealSolution | CoreError::NonConvergence { .. })) => {
            return Ok(vec![Record::Failure(FailureRecord {
                params,
                error: e.to_string(),
            })])
        }
        Err(e) => return Err(ConfigError::new("spec", e.to_string())),
    };
    let mut out: Vec<Record> = outcome.states.iter().map(|s| state_record(&params, s, opts)).collect();
    if opts.emit_complex {
        out.extend(outcome.complex_roots.iter().map(|c| {
            Record::ComplexConfiguration(ComplexRecord {
                params: params.clone(),
                roots: c.as_slice().iter().map(|z| [z.re, z.im]).collect(),
            })
        }));
    }
    if out.is_empty() {
        out.push(Record::Failure(FailureRecord {
            params,
            error: CoreError::NoRealSolution.to_string(),
        }));
    }
    Ok(out)
}

/// Cartesian product of the sweep axes applied to `base`.
pub fn sweep_points(base: &SpecParams, axes: &[Axis]) -> ConfigResult<Vec<SpecParams>> {
    let mut points = vec![base.clone()];
    for axis in axes {
        let path = format!("sweep.{}", axis.name);
        if let Some(k) = axis.name.strip_prefix('b') {
            let k: usize = k.parse().expect("axis names are fixed");
            if k > base.b.len() {
                return Err(ConfigError::new(path, format!("spec.b has only {} entries", base.b.len())));
            }
        }
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    match axis.name.as_str() {
                        "lambda" => q.lambda = v,
                        "a" => q.a = v,
                        "b1" => q.b[0] = v,
                        "b2" => q.b[1] = v,
                        "b3" => q.b[2] = v,
                        "n" => q.n = v as usize,
                        "l" => q.l = v as u32,
                        "d" => q.d = v as u32,
                        _ => unreachable!("axis names are checked when parsing"),
                    }
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Runs every sweep point in parallel; records come back sorted by their
/// parameter tuple.
pub fn sweep(base: &SpecParams, axes: &[Axis], opts: &RunOptions) -> ConfigResult<Vec<Record>> {
    let mut points = sweep_points(base, axes)?;
    points.sort_by(|x, y| cmp_keys(&x.key(), &y.key()));
    let results: Vec<ConfigResult<Vec<Record>>> = points.par_iter().map(|p| solve_point(p, opts)).collect();
    let mut out = Vec::new();
    for (p, r) in points.iter().zip(results) {
        // validation errors of individual points are reported, not fatal
        match r {
            Ok(recs) => out.extend(recs),
            Err(e) => out.push(Record::Failure(FailureRecord {
                params: Params::from(p),
                error: e.to_string(),
            })),
        }
    }
    Ok(out)
}

fn cmp_keys(x: &[f64], y: &[f64]) -> std::cmp::Ordering {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(x.len().cmp(&y.len()))
}
