//! Command-line front end for the `ctcsim` engines.

pub mod args;
pub mod commands;
pub mod record;

use std::io::Write;

pub use args::{Cli, Command};
pub use commands::CliError;

/// Runs one parsed command and returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Run(a) => commands::cmd_run(a, out, err),
        Command::Sweep(a) => commands::cmd_sweep(a, out, err),
        Command::Compare(a) => commands::cmd_compare(a, out, err),
        Command::Geometry(a) => match commands::cmd_geometry(a, out) {
            Ok(true) => Ok(()),
            Ok(false) => return 1,
            Err(e) => Err(e),
        },
        Command::ConjectureCheck(a) => commands::cmd_conjecture(a, out).map(|_| ()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
