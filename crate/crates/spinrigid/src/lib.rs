//! Command-line front end for `spinrigid-core`: golden-data loading,
//! versioned reports, csv export and atomic output files.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod golden;
pub mod output;
pub mod report;

use error::{EXIT_CHECK_FAILED, EXIT_PASS};

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: &cli::Cli) -> i32 {
    let common = cli.command.common();
    let outcome = match cli::dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("spinrigid: {e}");
            return e.exit_code();
        }
    };
    let written = output::render(&outcome.report, &outcome.table, common.format)
        .and_then(|text| output::emit(&text, common.out.as_deref()));
    if let Err(e) = written {
        eprintln!("spinrigid: {e}");
        return e.exit_code();
    }
    if outcome.report.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}
