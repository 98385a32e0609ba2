//! File formats and subcommands of the `luinv` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::panic::{self, AssertUnwindSafe};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use error::CliError;

/// Parses `args`, runs the command and returns the process exit code.
///
/// Every path ends in 0, 1 or 2: usage errors and panics map to 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| commands::run(cli.command))) {
        Ok(Ok(status)) => status.code(),
        Ok(Err(e)) => {
            eprintln!("luinv: error: {e}");
            2
        }
        Err(_) => {
            eprintln!("luinv: internal error");
            2
        }
    }
}
