use std::fs::File;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use longtail_core::analysis::{calibrate_mu, turnover};

use crate::chart::ChartFile;
use crate::commands::print_json;
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct TurnoverArgs {
    /// Chart CSV (`period,product_id[,sales]`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub y: usize,
}

#[derive(Debug, Serialize)]
pub struct TurnoverReport {
    pub y: usize,
    pub first_period: i64,
    pub periods: usize,
    /// Turnover of each period after the first.
    pub z_per_period: Vec<usize>,
    pub z_bar: f64,
    pub z_bar_over_y: f64,
    /// `(z̄ / y)²`.
    pub mu_hat: f64,
}

pub fn report(chart: &ChartFile, y: usize) -> Result<TurnoverReport, CliError> {
    let series = chart.top_y_series(y)?;
    let stats = turnover(&series).map_err(|e| CliError::InsufficientData(e.to_string()))?;
    let mu_hat = calibrate_mu(stats.as_fraction).map_err(|e| CliError::validation("input", e))?;
    Ok(TurnoverReport {
        y,
        first_period: chart.first_period,
        periods: chart.periods.len(),
        z_per_period: stats.z_per_period,
        z_bar: stats.z_bar,
        z_bar_over_y: stats.as_fraction,
        mu_hat,
    })
}

pub fn execute(args: TurnoverArgs) -> Result<(), CliError> {
    let f = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let chart = ChartFile::parse(f)?;
    print_json(&report(&chart, args.y)?)
}
