use std::process::ExitCode;

use clap::Parser;
use committee_power::cli::{error_report, exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_report(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
