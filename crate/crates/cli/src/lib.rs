//! Command-line layer for the spin market simulator: configuration,
//! simulation runs, statistics artifacts, SVG figures and figure recipes.

pub mod analyze;
pub mod config;
pub mod csvio;
pub mod error;
pub mod plot;
pub mod record;
pub mod reproduce;
mod seed_serde;
pub mod simulate;
pub mod svg;

pub use config::{parse_config, parse_sweep, ExperimentConfig, RunArgs};
pub use error::{CliError, Result};
