//! File formats, experiment runner and command-line front end for
//! `matchest-core`.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod family;
pub mod formats;

pub use error::{CliError, Result};
pub use experiment::{l0_churn_updates, run_experiment, ExperimentConfig, Report, Task};
pub use family::{Family, Manifest};
