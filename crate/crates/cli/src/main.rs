use std::fs;
use std::process::ExitCode;

use clap::Parser;
use diverse_medians_cli::{run_to_string, CliError, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match execute(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = e.remediation() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let json = run_to_string(cfg)?;
    match &cfg.output {
        Some(path) => fs::write(path, json)
            .map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() }),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}
