//! Model files and the `gal` command-line driver.

pub mod commands;
pub mod error;
pub mod modelfile;

pub use commands::{run, Cli, Outcome, BUNDLED};
pub use error::CliError;
