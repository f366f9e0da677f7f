pub mod fit;
pub mod optimize;
pub mod reproduce;
pub mod simulate;
pub mod turnover;

use serde::Serialize;

use crate::error::CliError;

pub(crate) fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation("output", e))?;
    println!("{text}");
    Ok(())
}
