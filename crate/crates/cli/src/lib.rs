//! Command-line front end for `gkz-core`: instance configs, seeded sampling,
//! identity suites and JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod sample;
pub mod suites;

pub use commands::{run, Command, Report};
pub use config::{Coordinate, InstanceConfig};
pub use error::CliError;
pub use sample::{sample_point, Sampled};
