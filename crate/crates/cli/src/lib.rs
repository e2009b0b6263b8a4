//! Command-line front end: configuration loading, command handlers and
//! artifact serialization.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{load_config, RunConfig};
pub use error::CliError;
