//! File formats, reports and the command surface of the `fibrak` tool.

pub mod cmd;
pub mod dot;
pub mod error;
pub mod format;
pub mod report;

pub use cmd::{run, Cli, Command};
pub use error::{CliError, Result};
