//! Quasi-exactly solvable extensions of the quantum oscillator on a
//! d-dimensional space of constant curvature.
//!
//! The crate builds the two QES potential families, solves their algebraic
//! sector with a functional Bethe ansatz engine ([`fba`]), cross-checks the
//! first member of each family against the hidden sl(2,R) matrix form
//! ([`sl2`]) and verifies states against independent numerics ([`oracle`]).

pub mod error;
pub mod families;
pub mod fba;
pub mod oracle;
pub mod oscillator;
pub mod poly;
pub mod sl2;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
