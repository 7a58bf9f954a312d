//! Command-line front end for `localinv-core`.

pub mod args;
pub mod commands;
pub mod error;

pub use commands::{run, Output, SCHEMA_VERSION};
pub use error::{CliError, CliResult};
