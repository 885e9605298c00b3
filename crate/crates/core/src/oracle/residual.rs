use crate::error::Result;
use crate::families::potential_unchecked;
use crate::oracle::GridSpec;
use crate::oscillator::{radial_operator, v0_eval, OscillatorSpec, SpaceConfig};
use crate::spectrum::SolvedState;

/// `max|Hψ − Eψ| / ((1+|E|) max|ψ|)` over the grid, with `ψ` and its
/// derivatives taken in closed form.
pub fn ode_residual(state: &SolvedState, grid: &GridSpec) -> Result<f64> {
    ode_residual_at_energy(state, grid, state.energy())
}

/// Same as [`ode_residual`] with the energy replaced by `energy`.
pub fn ode_residual_at_energy(state: &SolvedState, grid: &GridSpec, energy: f64) -> Result<f64> {
    let spec = state.spec();
    let (big_a, big_b) = spec.coefficients()?;
    let lam = spec.space().lambda();
    let wf = state.wavefunction();
    scaled_residual(spec.space(), grid, energy, |r| {
        let (p, dp, ddp) = wf.eval_with_derivatives(r);
        (p, dp, ddp, potential_unchecked(spec.family(), lam, big_a, &big_b, r))
    })
}

/// Residual of the baseline eigenfunction with radial quantum number `n_r`.
pub fn oscillator_residual(osc: &OscillatorSpec, n_r: usize, grid: &GridSpec) -> Result<f64> {
    let n = 2 * n_r + osc.space().l() as usize;
    let energy = osc.energy(n)?;
    let lam = osc.space().lambda();
    let big_a = osc.big_a();
    let mut err = None;
    let res = scaled_residual(osc.space(), grid, energy, |r| {
        let (p, dp, ddp) = osc.wavefunction_with_derivatives(n_r, r).unwrap_or_else(|e| {
            err = Some(e);
            (f64::NAN, f64::NAN, f64::NAN)
        });
        (p, dp, ddp, v0_eval(lam, big_a, r))
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(res),
    }
}

fn scaled_residual<F>(space: &SpaceConfig, grid: &GridSpec, energy: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64, f64, f64),
{
    let mut max_res: f64 = 0.0;
    let mut max_psi: f64 = 0.0;
    for r in grid.evaluation_nodes() {
        space.check_coordinate(r)?;
        let (p, dp, ddp, v) = f(r);
        let h = radial_operator(space, r, p, dp, ddp, v);
        let res = (h - energy * p).abs();
        if res.is_nan() || p.is_nan() {
            return Ok(f64::INFINITY);
        }
        max_res = max_res.max(res);
        max_psi = max_psi.max(p.abs());
    }
    if max_psi == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(max_res / ((1.0 + energy.abs()) * max_psi))
}
