//! Command implementations behind the `qzeta` binary.

pub mod commands;
pub mod report;

pub use commands::CliError;
pub use report::{Format, Report, REPORT_SCHEMA};
