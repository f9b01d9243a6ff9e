//! Command-line front end: expression parsing, subcommands and reports.

pub mod parse;
pub mod report;

mod commands;

pub use commands::{run, run_with, ExitStatus};
