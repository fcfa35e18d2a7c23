//! File formats, grid output, verification reports and the subcommands of
//! the `soliton` binary.

pub mod commands;
pub mod error;
pub mod grid;
pub mod record;
pub mod report;

pub use error::{CliError, Result};
