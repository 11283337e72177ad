//! Command-line front end for `sqr-core`: netlist files, CSV/JSON output,
//! parallel sweeps and the `verify` suite.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod netlist_file;
pub mod suite;
pub mod threads;

pub use cli::{run, Cli};
pub use error::{CliError, Exit};
