use std::io;
use std::process::ExitCode;

use clap::Parser;
use ctcsim_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    ExitCode::from(execute(&cli, &mut out, &mut err))
}
