//! Experiment runner: every command produces a [`Table`] plus the list of
//! assertions that failed, and [`criteria`] holds the acceptance suite.

pub mod commands;
pub mod config;
pub mod criteria;
mod error;
pub mod table;

pub use commands::{cmd_block, cmd_cesaro, cmd_norms, cmd_orbit, cmd_verify, run, Outcome};
pub use config::{Cli, Command, Format, NumericMode, RunConfig};
pub use error::CliError;
pub use table::{Cell, Column, Table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// The rendered output of an outcome in the configured format.
pub fn render(config: &RunConfig, outcome: &Outcome) -> String {
    match config.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            let doc = serde_json::json!({
                "passed": outcome.passed(),
                "failures": outcome.failures,
                "columns": outcome.table.header(),
                "rows": outcome.table.to_json_rows(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Sizes the global thread pool from `ERGOLAB_THREADS` when set.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("ERGOLAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
