//! Batch driver for the QES oscillator solver: config parsing, solve,
//! verify and sweep records, and plot data.

pub mod config;
pub mod figure;
pub mod record;
pub mod run;
