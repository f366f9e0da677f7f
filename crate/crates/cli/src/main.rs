mod chart;
mod commands;
mod error;
mod format;
mod manifest;
mod svg;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "longtail", version, about = "Random-copying market simulation, turnover analysis and shelf-space sizing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write sales, top-y lists and turnover.
    Simulate(commands::simulate::SimulateArgs),
    /// Fit a power-law exponent to a sales column.
    Fit(commands::fit::FitArgs),
    /// Measure turnover of a best-seller chart and infer μ.
    Turnover(commands::turnover::TurnoverArgs),
    /// Optimal number of stocked items under turnover costs.
    Optimize(commands::optimize::OptimizeArgs),
    /// Regenerate a figure's data table and plot.
    Reproduce(commands::reproduce::ReproduceArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate::execute(a),
        Command::Fit(a) => commands::fit::execute(a),
        Command::Turnover(a) => commands::turnover::execute(a),
        Command::Optimize(a) => commands::optimize::execute(a),
        Command::Reproduce(a) => commands::reproduce::execute(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
