//! Command-line front end: spec files, dispatch and rendering.

pub mod commands;
pub mod error;
pub mod spec;

pub use commands::{run, Cli};
pub use error::CliError;
