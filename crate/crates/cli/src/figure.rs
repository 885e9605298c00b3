//! Plot data on the line: potentials and ground-state wavefunctions of
//! several `(m, b)` variants, written as CSV columns.

use std::io::Write;

use qes_core::oscillator::{v0_eval, OscillatorSpec, SpaceConfig};
use qes_core::spectrum::{solve_states, SolvedState};

use crate::config::{ConfigError, ConfigResult, FigureConfig, FigureKind, Normalization, SpecParams};

pub const DEFAULT_POINTS: usize = 501;

/// Plotted `x` range: `[-2.5, 2.5]/√λ` for `λ > 0`, 95 % of the bounded
/// interval for `λ < 0`.
pub fn default_range(lambda: f64) -> (f64, f64) {
    let k = lambda.abs().sqrt();
    let half = if lambda > 0.0 { 2.5 / k } else { 0.95 / k };
    (-half, half)
}

/// The eight caption setups: both families, both signs of `λ`, potentials
/// and ground states, each for `m = 1, 2, 3` with all `b_j = 1`.
pub fn preset(k: usize) -> Option<FigureConfig> {
    if !(1..=8).contains(&k) {
        return None;
    }
    let family = if k <= 4 { 1 } else { 2 };
    let lambda = if (k - 1) % 4 < 2 { 1.0 } else { -1.0 };
    let a = if family == 1 && lambda < 0.0 { -1.0 } else { 0.5 };
    let variants = (1..=3)
        .map(|m| SpecParams {
            family,
            lambda,
            d: 1,
            l: 0,
            a,
            b: vec![1.0; m],
            n: 0,
        })
        .collect();
    let (x_min, x_max) = default_range(lambda);
    Some(FigureConfig {
        kind: if k % 2 == 1 { FigureKind::Potential } else { FigureKind::Wavefunction },
        variants,
        baseline: family == 1,
        x_min,
        x_max,
        points: DEFAULT_POINTS,
        normalization: if family == 2 && k.is_multiple_of(2) { Normalization::Origin } else { Normalization::Max },
    })
}

fn ground_state(v: &SpecParams, path: &str) -> ConfigResult<SolvedState> {
    let spec = v.build(path)?;
    let states = solve_states(&spec).map_err(|e| ConfigError::new(path, e.to_string()))?;
    states
        .into_iter()
        .min_by(|x, y| x.energy().total_cmp(&y.energy()))
        .ok_or_else(|| ConfigError::new(path, "no real root configuration"))
}

/// Undeformed oscillator with the same `A`; `β/λ` is the root of
/// `t(t+1) = A` that makes `β` positive.
fn baseline(space: SpaceConfig, big_a: f64) -> Option<OscillatorSpec> {
    let lam = space.lambda();
    let disc = (1.0 + 4.0 * big_a).sqrt();
    [0.5 * (disc - 1.0), -0.5 * (disc + 1.0)]
        .into_iter()
        .map(|t| lam * t)
        .find(|&beta| beta > 0.0)
        .and_then(|beta| OscillatorSpec::new(space, beta).ok())
}

fn normalize(values: &mut [f64], at_origin: Option<f64>, path: &str) -> ConfigResult<()> {
    let scale = match at_origin {
        Some(v) => {
            if v == 0.0 || !v.is_finite() {
                return Err(ConfigError::new(path, "psi(0) vanishes; origin normalization needs an even state"));
            }
            v
        }
        None => values.iter().fold(0.0_f64, |m, x| if x.abs() > m.abs() { *x } else { m }),
    };
    if scale != 0.0 {
        values.iter_mut().for_each(|x| *x /= scale);
    }
    Ok(())
}

pub struct FigureData {
    pub headers: Vec<String>,
    pub x: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
}

pub fn compute(fig: &FigureConfig) -> ConfigResult<FigureData> {
    let x: Vec<f64> = (0..fig.points)
        .map(|i| fig.x_min + (fig.x_max - fig.x_min) * i as f64 / (fig.points - 1) as f64)
        .collect();
    let mut headers = vec!["x".to_string()];
    let mut columns = Vec::new();
    let mut first_a = None;
    for (i, v) in fig.variants.iter().enumerate() {
        let path = format!("figure.variant[{i}]");
        let state = ground_state(v, &path)?;
        let space = *state.spec().space();
        let label = format!("m{}_b{}", v.b.len(), v.b.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("_"));
        first_a.get_or_insert((space, state.spec().big_a().unwrap()));
        let inside = |x: f64| space.check_coordinate(x).is_ok();
        match fig.kind {
            FigureKind::Potential => {
                headers.push(format!("V_{label}"));
                columns.push(x.iter().map(|&x| state.potential(x.abs()).unwrap_or(f64::NAN)).collect());
            }
            FigureKind::Wavefunction => {
                headers.push(format!("psi_{label}"));
                let mut col: Vec<f64> = x
                    .iter()
                    .map(|&x| if inside(x) { state.wavefunction().eval(x) } else { f64::NAN })
                    .collect();
                let origin = matches!(fig.normalization, Normalization::Origin).then(|| state.wavefunction().eval(0.0));
                normalize(&mut col, origin, &path)?;
                columns.push(col);
            }
        }
    }
    if fig.baseline {
        let (space, big_a) = first_a.expect("figures have at least one variant");
        let osc = baseline(space, big_a).ok_or_else(|| ConfigError::new("figure.baseline", "no positive beta for this A"))?;
        let inside = |x: f64| space.check_coordinate(x).is_ok();
        match fig.kind {
            FigureKind::Potential => {
                headers.push("V0".into());
                columns.push(x.iter().map(|&x| if inside(x) { v0_eval(space.lambda(), big_a, x) } else { f64::NAN }).collect());
            }
            FigureKind::Wavefunction => {
                headers.push("psi0".into());
                let mut col: Vec<f64> = x
                    .iter()
                    .map(|&x| if inside(x) { osc.wavefunction(0, x.abs()).unwrap_or(f64::NAN) } else { f64::NAN })
                    .collect();
                let origin = matches!(fig.normalization, Normalization::Origin).then(|| osc.wavefunction(0, 0.0).unwrap_or(f64::NAN));
                normalize(&mut col, origin, "figure.baseline")?;
                columns.push(col);
            }
        }
    }
    Ok(FigureData { headers, x, columns })
}

pub fn write_csv<W: Write>(data: &FigureData, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&data.headers)?;
    for (i, x) in data.x.iter().enumerate() {
        let mut row = vec![x.to_string()];
        row.extend(data.columns.iter().map(|c| c[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
