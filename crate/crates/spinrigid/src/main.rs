use std::process::ExitCode;

use clap::Parser;
use spinrigid::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(spinrigid::run(&cli) as u8)
}
