use std::process::ExitCode;

use clap::Parser;
use jamfield_cli::{execute, Cli};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
