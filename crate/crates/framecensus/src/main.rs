use std::process::ExitCode;

use clap::Parser;
use framecensus::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(&cli)
}
