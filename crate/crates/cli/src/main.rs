use std::io;
use std::process::ExitCode;

use clap::Parser;
use fusionweave_cli::app::{run, Cli, INPUT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR as u8)
        }
    }
}
