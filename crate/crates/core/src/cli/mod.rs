//! Configuration-driven experiments behind the `holophase` binary.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{parse_config, ExperimentConfig};
pub use report::{write_plane_report, write_report, write_synth, ResultRow, Summary};
pub use runner::{run_convergence, run_plane_demo, run_recover, run_synth, RunOptions};
