mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::RunConfig;
use commands::Outcome;

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match commands::run(&config) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            for line in &e.trace {
                eprintln!("  {line}");
            }
            ExitCode::from(e.code)
        }
    }
}
