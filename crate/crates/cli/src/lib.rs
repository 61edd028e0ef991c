//! Config parsing, runs, sweeps and validity reports for `eprsim`.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{parse_sweep, run, sweep, validity_report, RunManifest, RunOutcome, Summary, ValidityReport};
pub use config::{config_hash, emit_config, parse_config, parse_config_str, Loaded};
pub use error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
