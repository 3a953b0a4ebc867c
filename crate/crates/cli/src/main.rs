use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ergolab_cli::{configure_threads, render, run, Cli, CliError, RunConfig, EXIT_ASSERTION, EXIT_PASS};

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return exit(EXIT_PASS);
        }
        Err(e) => {
            let _ = e.print();
            return exit(ergolab_cli::EXIT_USAGE);
        }
    };
    match execute(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("ergolab: {e}");
            exit(e.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    configure_threads(std::env::var("ERGOLAB_THREADS").ok().as_deref())?;
    let config = RunConfig::from_cli(cli)?;
    let outcome = run(&config)?;
    let text = render(&config, &outcome);
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    for f in &outcome.failures {
        eprintln!("assertion failed: {f}");
    }
    Ok(if outcome.passed() { EXIT_PASS } else { EXIT_ASSERTION })
}
