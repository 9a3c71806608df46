use std::process::ExitCode;

use clap::{Parser, Subcommand};
use signilp_cli::{
    curve, extract, finish, generate, learn_cmd, parse_args, plot, robust, CurveArgs, ExtractArgs, GenerateArgs,
    LearnArgs, PlotArgs, RobustArgs,
};

/// Learns traffic-sign rules from a few examples and checks them against
/// perturbed signs.
#[derive(Parser, Debug)]
#[command(name = "signilp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a labelled sign dataset.
    Generate(GenerateArgs),
    /// Extract logic facts from a rendered dataset.
    Extract(ExtractArgs),
    /// Learn a rule from background knowledge and examples.
    Learn(LearnArgs),
    /// Run a learning-curve experiment from a JSON config.
    Curve(CurveArgs),
    /// Score a rule on perturbed datasets.
    Robust(RobustArgs),
    /// Draw a learning-curve CSV as SVG.
    Plot(PlotArgs),
}

fn main() -> ExitCode {
    let cli: Cli = match parse_args() {
        Ok(c) => c,
        Err(code) => return code,
    };
    finish(match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Extract(a) => extract(a),
        Command::Learn(a) => learn_cmd(a),
        Command::Curve(a) => curve(a),
        Command::Robust(a) => robust(a),
        Command::Plot(a) => plot(a),
    })
}
