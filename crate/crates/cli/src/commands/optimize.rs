use clap::Args;
use serde::Serialize;

use longtail_core::inventory::{optimal_y_bruteforce, InventoryParams, InventoryResult, BOOK_SALES_ALPHA, DEFAULT_Y_MAX};

use crate::commands::print_json;
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Profit per item sold.
    #[arg(long = "A")]
    pub a: f64,
    /// Cost per item added to the stock.
    #[arg(long = "B")]
    pub b: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = BOOK_SALES_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_Y_MAX)]
    pub y_max: u64,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub params: InventoryParams,
    #[serde(flatten)]
    pub result: InventoryResult,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn report(args: &OptimizeArgs) -> Result<OptimizeReport, CliError> {
    let params = InventoryParams::new(args.a, args.b, args.mu, args.alpha)
        .and_then(|p| p.with_y_max(args.y_max))
        .map_err(|e| CliError::validation(format!("--{}", e.field()), e))?;
    let result = optimal_y_bruteforce(&params);
    let mut notes = Vec::new();
    if result.closed_form_disagrees() {
        notes.push(format!(
            "closed form (A/(B*sqrt(mu)))^(1/(alpha+1)) gives {} but the exact argmax is {}; \
             the marginal condition A*y^-alpha = B*sqrt(mu) implies exponent 1/alpha ({:.3})",
            result.y_paper, result.y_bruteforce, result.y_marginal_value
        ));
    }
    if result.y_max_binding {
        notes.push(format!("search stopped at y_max = {} with the marginal gain still positive", params.y_max));
    }
    Ok(OptimizeReport { params, result, notes })
}

pub fn execute(args: OptimizeArgs) -> Result<(), CliError> {
    let r = report(&args)?;
    for n in &r.notes {
        eprintln!("note: {n}");
    }
    print_json(&r)
}
