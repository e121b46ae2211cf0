use std::process::ExitCode;

use clap::Parser;
use morse_dk_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            match &outcome.status {
                Status::Ok => {}
                Status::ToleranceFailure(msg) => eprintln!("tolerance failure: {msg}"),
                Status::NonConvergence(msg) => eprintln!("numerical failure: {msg}"),
            }
            ExitCode::from(outcome.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
