//! The `gul` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments or
//! unreadable input, 3 numerical failure or unwritable output. Failures print
//! one line `error[<kind>]: <reason>` on stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod files;
pub mod pair_store;
pub mod selftest;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Verification(_) => "verification",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }
}

impl From<gul_core::Error> for CliError {
    fn from(e: gul_core::Error) -> Self {
        match e {
            gul_core::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo = argv.iter().map(|a| a.to_string_lossy()).collect::<Vec<_>>().join(" ");
    let cli = match args::Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ").trim();
            let _ = writeln!(err, "error[usage]: {first}");
            return 2;
        }
    };
    match commands::dispatch(cli, &echo, out) {
        Ok(code) => code,
        Err(e) => {
            let reason = e.to_string().replace(['\n', '\r'], " ");
            let _ = writeln!(err, "error[{}]: {reason}", e.kind());
            e.exit_code()
        }
    }
}
