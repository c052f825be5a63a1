use std::process::ExitCode;

use clap::Parser;
use ricci_rev_service::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
