use std::fs::File;
use std::io::Read;
use std::path::PathBuf;

use clap::Args;

use longtail_core::analysis::{fit_alpha, AnalysisError};

use crate::commands::print_json;
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV file with a column of positive integer sales.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub s_min: u64,
    /// Name of the sales column.
    #[arg(long, default_value = "sales")]
    pub column: String,
}

pub fn read_sales<R: Read>(reader: R, column: &str) -> Result<Vec<u64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CliError::validation("input", e))?;
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| CliError::validation("input", format!("no `{column}` column")))?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::validation("input", e))?;
        let raw = rec.get(idx).unwrap_or("");
        let v: u64 = raw
            .parse()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| CliError::validation("input", format!("row {}: `{raw}` is not a positive integer", line + 2)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn execute(args: FitArgs) -> Result<(), CliError> {
    if args.s_min == 0 {
        return Err(CliError::validation("--s-min", "must be at least 1"));
    }
    let f = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let samples = read_sales(f, &args.column)?;
    let fit = fit_alpha(&samples, args.s_min).map_err(|e| match e {
        AnalysisError::ZeroSMin => CliError::validation("--s-min", e),
        other => CliError::InsufficientData(other.to_string()),
    })?;
    print_json(&fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_named_column() {
        let v = read_sales("product_id,sales\n0,5\n1,1\n".as_bytes(), "sales").unwrap();
        assert_eq!(v, vec![5, 1]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(read_sales("sales\n0\n".as_bytes(), "sales").is_err());
        assert!(read_sales("sales\n-3\n".as_bytes(), "sales").is_err());
        assert!(read_sales("sales\n2.5\n".as_bytes(), "sales").is_err());
        assert!(read_sales("count\n2\n".as_bytes(), "sales").is_err());
    }
}
