use std::process::ExitCode;

use clap::Parser;
use framecurve_cli::{error::exit, run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on malformed command lines
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(exit::OK as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
