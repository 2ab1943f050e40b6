//! Experiment harness around `commpress`: configs, synthetic graphs, the
//! detect → order → cost pipeline and result tables.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod synth;

pub use config::{BenchMethod, ExperimentConfig};
pub use error::{BenchError, Result};
pub use report::ReportRow;
pub use runner::{run_cell, run_experiment, CellParams, RunOutcome};
