use std::io::Write;
use std::process::ExitCode;

use balconf_cli::commands::EXIT_INPUT;
use balconf_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.output.as_bytes()).is_err() {
                return ExitCode::from(EXIT_INPUT as u8);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("balconf: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
