mod cli;
mod commands;
mod format;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cli::Cli::parse();
    let output = match commands::run(&cli) {
        Ok(output) => output,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            return ExitCode::from(failure.exit_code() as u8);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, output.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(output.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
