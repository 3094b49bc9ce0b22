use std::process::ExitCode;

use clap::Parser;
use surface_flips::cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let stdout = std::io::stdout();
    match run(&cfg, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
