use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Bethe problem: {0}")]
    InvalidProblem(String),

    #[error("root z[{index}] = {value} lies within pole tolerance of a zero of P(z)")]
    PoleProximity { index: usize, value: f64 },

    #[error("roots z[{i}] and z[{j}] are not distinct")]
    DuplicateRoots { i: usize, j: usize },

    #[error("root index {index} out of range for {n} roots")]
    RootIndex { index: usize, n: usize },

    #[error("no admissible real solution")]
    NoRealSolution,

    #[error("no converged configuration after {starts} starts")]
    NonConvergence { starts: usize },

    #[error("roots do not satisfy the Bethe equations (max scaled residual {residual:e})")]
    InvalidRoots { residual: f64 },

    #[error("coordinate {r} outside the domain {domain}")]
    DomainError { r: f64, domain: String },

    #[error("level n = {n} exceeds n_max = {n_max}")]
    LevelOutOfRange { n: usize, n_max: usize },

    #[error("no normalizable level: beta/lambda = {ratio} leaves the window empty for d = {d}")]
    EmptySpectrum { ratio: f64, d: u32 },

    #[error("operation requires the {expected} family")]
    WrongFamily { expected: &'static str },

    #[error("unsupported case: {field} = {value}")]
    UnsupportedCase { field: &'static str, value: String },

    #[error("potential spec is missing {0}")]
    IncompleteSpec(String),

    #[error("grid too coarse: possible unresolved oscillation near r = {r}")]
    GridTooCoarse { r: f64 },

    #[error("finite-difference eigenvalues moved by {shift:e} under grid doubling")]
    FdNonConvergence { shift: f64 },

    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}
