//! The `warpwatch` command line.
//!
//! [`run`] parses arguments and returns the process exit code: 0 on success,
//! 1 for invalid input or flags, 2 for I/O and encoder failures. Every
//! artifact is computed before the first file is written, so a rejected
//! request leaves the output directory untouched.
//!
//! Each setting is looked up as: explicit flag, then `WARPWATCH_*`
//! environment variable, then the `--config` JSON file, then the default.

mod args;
mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::Parser;

pub use args::{Cli, Command, OutputKind};
pub use error::CliError;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = match cli.command {
        Command::Plan(a) => commands::plan(a, out, err),
        Command::Retime(a) => commands::retime(a, out),
        Command::Stats(a) => commands::stats(a, out),
        Command::Fit(a) => commands::fit(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
