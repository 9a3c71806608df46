use std::process::ExitCode;

use clap::{Parser, Subcommand};
use signilp_cli::{extract, finish, parse_args, ExtractArgs};

/// Turns sign images into logic facts.
#[derive(Parser, Debug)]
#[command(name = "factext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract facts for every image in a manifest.
    Extract(ExtractArgs),
}

fn main() -> ExitCode {
    let cli: Cli = match parse_args() {
        Ok(c) => c,
        Err(code) => return code,
    };
    match &cli.command {
        Command::Extract(a) => finish(extract(a)),
    }
}
