use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod manifest;

/// Failure of a command, carrying the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Divergence(String),
    #[error("{0} acceptance check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Divergence(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<legendre_spectra::Error> for CliError {
    fn from(err: legendre_spectra::Error) -> Self {
        use legendre_spectra::Error as E;
        match err {
            E::Domain(_) => CliError::Usage(err.to_string()),
            E::Divergence { .. } => CliError::Divergence(err.to_string()),
            E::Data(_) | E::Parse { .. } | E::Internal(_) | E::Io(_) => CliError::Data(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
