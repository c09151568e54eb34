//! Command-line front end: experiment configs, verification suites and
//! angle sweeps, with JSON and CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::{ExperimentConfig, Format, ModelKind};
pub use error::{CliError, CliResult};
pub use report::ExperimentReport;
pub use run::{run_experiment, write_outputs};
