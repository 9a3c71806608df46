use std::process::ExitCode;

use clap::{Parser, Subcommand};
use signilp_cli::{finish, generate, parse_args, GenerateArgs};

/// Renders synthetic traffic-sign datasets.
#[derive(Parser, Debug)]
#[command(name = "signscene", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write `<id>.ppm` images and manifest.json.
    Generate(GenerateArgs),
}

fn main() -> ExitCode {
    let cli: Cli = match parse_args() {
        Ok(c) => c,
        Err(code) => return code,
    };
    match &cli.command {
        Command::Generate(a) => finish(generate(a)),
    }
}
