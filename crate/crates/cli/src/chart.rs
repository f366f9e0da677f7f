//! Best-seller chart files.
//!
//! A chart is a CSV with header `period,product_id` or
//! `period,product_id,sales`, one row per charted item per period. Without a
//! sales column the row order inside a period is the rank; with one, items
//! are ranked by sales descending and row order breaks ties. Product ids are
//! arbitrary strings, periods are integers that must form a contiguous range.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;

use longtail_core::analysis::TopYSeries;
use longtail_core::ProductId;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ChartFile {
    pub first_period: i64,
    /// Ranked product labels for each period in order.
    pub periods: Vec<Vec<String>>,
}

impl ChartFile {
    pub fn parse<R: Read>(reader: R) -> Result<Self, CliError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| CliError::validation("input", e))?.clone();
        let cols: Vec<&str> = header.iter().collect();
        let has_sales = match cols.as_slice() {
            ["period", "product_id"] => false,
            ["period", "product_id", "sales"] => true,
            _ => {
                return Err(CliError::validation(
                    "input",
                    format!("expected header `period,product_id[,sales]`, got `{}`", cols.join(",")),
                ))
            }
        };

        let mut by_period: BTreeMap<i64, Vec<(String, u64)>> = BTreeMap::new();
        let mut seen: HashSet<(i64, String)> = HashSet::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CliError::validation("input", e))?;
            let row = line + 2;
            let period: i64 = rec[0]
                .parse()
                .map_err(|_| CliError::validation("input", format!("row {row}: bad period `{}`", &rec[0])))?;
            let id = rec[1].to_string();
            if id.is_empty() {
                return Err(CliError::validation("input", format!("row {row}: empty product_id")));
            }
            let sales = if has_sales {
                rec[2]
                    .parse()
                    .map_err(|_| CliError::validation("input", format!("row {row}: bad sales `{}`", &rec[2])))?
            } else {
                0
            };
            if !seen.insert((period, id.clone())) {
                return Err(CliError::validation(
                    "input",
                    format!("row {row}: product `{id}` listed twice in period {period}"),
                ));
            }
            by_period.entry(period).or_default().push((id, sales));
        }

        let Some(&first_period) = by_period.keys().next() else {
            return Err(CliError::InsufficientData("chart has no rows".into()));
        };
        for (expected, &p) in (first_period..).zip(by_period.keys()) {
            if p != expected {
                return Err(CliError::validation(
                    "input",
                    format!("periods are not contiguous: period {expected} is missing"),
                ));
            }
        }

        let periods = by_period
            .into_values()
            .map(|mut items| {
                if has_sales {
                    items.sort_by_key(|item| std::cmp::Reverse(item.1));
                }
                items.into_iter().map(|(id, _)| id).collect()
            })
            .collect();
        Ok(ChartFile { first_period, periods })
    }

    pub fn shortest_list(&self) -> usize {
        self.periods.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Top-`y` lists with labels interned consistently across periods.
    pub fn top_y_series(&self, y: usize) -> Result<TopYSeries, CliError> {
        if y == 0 {
            return Err(CliError::validation("y", "must be at least 1"));
        }
        let shortest = self.shortest_list();
        if y > shortest {
            return Err(CliError::validation(
                "y",
                format!("{y} exceeds the shortest chart list ({shortest} items)"),
            ));
        }
        let mut ids: HashMap<&str, ProductId> = HashMap::new();
        let lists = self
            .periods
            .iter()
            .map(|items| {
                items[..y]
                    .iter()
                    .map(|label| {
                        let next = ProductId(ids.len() as u64);
                        *ids.entry(label.as_str()).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        Ok(TopYSeries { y, lists })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ChartFile, CliError> {
        ChartFile::parse(text.as_bytes())
    }

    #[test]
    fn row_order_is_rank() {
        let c = parse("period,product_id\n1,a\n1,b\n2,b\n2,c\n").unwrap();
        assert_eq!(c.first_period, 1);
        assert_eq!(c.periods, vec![vec!["a", "b"], vec!["b", "c"]]);
    }

    #[test]
    fn sales_column_ranks() {
        let c = parse("period,product_id,sales\n0,a,1\n0,b,9\n0,c,9\n").unwrap();
        assert_eq!(c.periods, vec![vec!["b", "c", "a"]]);
    }

    #[test]
    fn interleaved_periods_are_grouped() {
        let c = parse("period,product_id\n2,x\n1,a\n2,y\n1,b\n").unwrap();
        assert_eq!(c.periods, vec![vec!["a", "b"], vec!["x", "y"]]);
    }

    #[test]
    fn rejects_gaps_duplicates_and_bad_headers() {
        assert!(matches!(parse("period,product_id\n1,a\n3,a\n"), Err(CliError::Validation { .. })));
        assert!(matches!(parse("period,product_id\n1,a\n1,a\n"), Err(CliError::Validation { .. })));
        assert!(matches!(parse("when,what\n1,a\n"), Err(CliError::Validation { .. })));
        assert!(matches!(parse("period,product_id\nx,a\n"), Err(CliError::Validation { .. })));
        assert!(matches!(parse("period,product_id\n"), Err(CliError::InsufficientData(_))));
    }

    #[test]
    fn y_bounded_by_shortest_list() {
        let c = parse("period,product_id\n1,a\n1,b\n2,c\n").unwrap();
        assert!(c.top_y_series(1).is_ok());
        assert!(matches!(c.top_y_series(2), Err(CliError::Validation { .. })));
    }

    #[test]
    fn labels_map_to_stable_ids() {
        let c = parse("period,product_id\n1,a\n1,b\n2,b\n2,a\n").unwrap();
        let s = c.top_y_series(2).unwrap();
        assert_eq!(s.lists[0], vec![ProductId(0), ProductId(1)]);
        assert_eq!(s.lists[1], vec![ProductId(1), ProductId(0)]);
    }
}
