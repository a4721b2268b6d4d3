//! Command-line front end for the two-way relay sum-BLER library: scenario
//! loading, CSV sweeps and JSON reports.

pub mod error;
pub mod reports;
pub mod scenario;
pub mod sweep;

pub use error::{CliError, Result};
