//! Command-line front end for `montrep-core`: argument parsing, the
//! versioned JSON schema, seeded sampling and the command runners.

pub mod args;
pub mod json;
pub mod run;
pub mod sample;

pub use args::Cli;
pub use run::{run, CliError, Exit};
