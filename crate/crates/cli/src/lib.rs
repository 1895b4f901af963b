//! Library side of the `reflectwalk` command: config parsing, the
//! subcommands, and CSV rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use commands::{Options, Report};
pub use config::RunConfig;
pub use error::CliError;
pub use format::Precision;
