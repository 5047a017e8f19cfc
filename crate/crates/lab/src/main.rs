use std::process::ExitCode;

use blockade_lab::cli;
use clap::Parser;

fn main() -> ExitCode {
    let args = cli::Cli::parse();
    match cli::run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("blockade-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
