//! Benchmark front end: model files, built-in model families, run reports
//! and the command-line driver.

pub mod cli;
pub mod generate;
pub mod modelfile;
pub mod report;
