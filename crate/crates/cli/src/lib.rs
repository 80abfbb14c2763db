//! Command-line orchestration: config parsing, grid execution with resume,
//! stream dumps, rank statistics and charts.

pub mod compare;
pub mod config;
pub mod gen;
pub mod plot;
pub mod runner;
