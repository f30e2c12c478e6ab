use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use kummer_cli::{init_workers, run, write_report, Cli, RunConfig, EXIT_INTERNAL, EXIT_INVALID_CONFIG};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INVALID_CONFIG as u8);
        }
    };
    let config = RunConfig::from_command(cli.command);
    if let Err(msg) = config.validate().and_then(|_| init_workers()) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INVALID_CONFIG as u8);
    }
    let outcome = run(config.clone());
    if let Err(e) = write_report(&config, &outcome.report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_INTERNAL as u8);
    }
    for note in outcome.report.notes.iter().filter(|n| n.starts_with("error:")) {
        eprintln!("{note}");
    }
    let failed = outcome.report.checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        eprintln!("{failed} check(s) failed");
    }
    ExitCode::from(outcome.exit_code as u8)
}
