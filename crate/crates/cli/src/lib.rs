//! Batch front end for `cloak-core`: profile solves, the profile figure,
//! the verification suite and the conformal ray figure, written as CSV,
//! JSON and SVG.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

pub use commands::{run, Outcome};
pub use config::{CommandKind, RunConfig};
pub use error::{CliError, Result};
