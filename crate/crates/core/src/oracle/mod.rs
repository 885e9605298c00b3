//! Independent numerical checks of closed-form states.

mod fd;
mod grid;
mod norm;
mod residual;

pub use fd::{
    continuum_threshold, fd_eigensolve, fd_oscillator, fd_solve, lowest_eigenvalues, measured_order, FdSpectrum,
    RadialProblem,
};
pub use grid::{measure_density, GridSpec};
pub use norm::{norm_integral, NormOutcome};
pub use residual::{ode_residual, ode_residual_at_energy, oscillator_residual};
