//! Command-line front end: group spec in, coupling plans and transfer
//! reports out. Every written file is deterministic in its inputs.

pub mod commands;
pub mod error;
pub mod output;
pub mod plan;
pub mod spec;

pub use commands::{run, Cli};
pub use error::CliError;
