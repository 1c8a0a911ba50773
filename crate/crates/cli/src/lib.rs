//! Command-line front end for the `telegraph` library.
//!
//! Every command produces one table, written as CSV or JSON to standard
//! output or `--out`. Diagnostics and summaries go to standard error.
//! Exit codes: 0 success, 1 usage or validation error, 2 verification
//! failure.

pub mod commands;
pub mod error;
pub mod grids;
pub mod sweep;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{execute, Cli, Outcome};
pub use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
pub use table::{Format, Table};

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli).and_then(|outcome| emit(&cli, outcome)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Writes the full table in one piece, then reports any deferred failure.
fn emit(cli: &Cli, outcome: Outcome) -> Result<i32, CliError> {
    let text = outcome.table.render(cli.global.format);
    match &cli.global.out {
        Some(path) => std::fs::write(path, text.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    if let Some(summary) = outcome.summary {
        eprintln!("{summary}");
    }
    match outcome.failure {
        Some(f) => {
            eprintln!("error: {f}");
            Ok(f.exit_code())
        }
        None => Ok(EXIT_OK),
    }
}
