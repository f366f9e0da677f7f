//! Shelf-space sizing for a retailer that stocks the current top-`y` list.
//!
//! Stocking the top `y` items earns `A·Σ_{i=1..y} i^-α` and pays
//! `B·y·√μ` to keep up with the list's turnover. Two answers are provided:
//! the published closed form `(A / (B√μ))^(1/(α+1))`, and the exact integer
//! argmax of the objective. They disagree because setting the marginal term
//! `A·y^-α` equal to `B√μ` yields exponent `1/α`, not `1/(α+1)`; the
//! argmax is the one to trust.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_Y_MAX: u64 = 1_000_000;

/// Exponent used for book-sales style markets.
pub const BOOK_SALES_ALPHA: f64 = 3.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InventoryError {
    #[error("profit per item A must be finite and >= 0, got {0}")]
    NegativeProfit(f64),
    #[error("turnover cost B must be finite and > 0, got {0}")]
    NonPositiveCost(f64),
    #[error("mu must lie in (0, 1], got {0}")]
    MuOutOfRange(f64),
    #[error("alpha must be finite and > 0, got {0}")]
    NonPositiveAlpha(f64),
    #[error("y_max must be at least 1")]
    ZeroYMax,
}

impl InventoryError {
    pub fn field(&self) -> &'static str {
        match self {
            InventoryError::NegativeProfit(_) => "A",
            InventoryError::NonPositiveCost(_) => "B",
            InventoryError::MuOutOfRange(_) => "mu",
            InventoryError::NonPositiveAlpha(_) => "alpha",
            InventoryError::ZeroYMax => "y-max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InventoryParams {
    /// `A`, profit per item sold.
    pub profit_per_item: f64,
    /// `B`, cost per new item added to the stock.
    pub turnover_cost: f64,
    pub mu: f64,
    pub alpha: f64,
    pub y_max: u64,
}

impl InventoryParams {
    pub fn new(
        profit_per_item: f64,
        turnover_cost: f64,
        mu: f64,
        alpha: f64,
    ) -> Result<Self, InventoryError> {
        let p = InventoryParams {
            profit_per_item,
            turnover_cost,
            mu,
            alpha,
            y_max: DEFAULT_Y_MAX,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_y_max(mut self, y_max: u64) -> Result<Self, InventoryError> {
        self.y_max = y_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), InventoryError> {
        if !(self.profit_per_item.is_finite() && self.profit_per_item >= 0.0) {
            return Err(InventoryError::NegativeProfit(self.profit_per_item));
        }
        if !(self.turnover_cost.is_finite() && self.turnover_cost > 0.0) {
            return Err(InventoryError::NonPositiveCost(self.turnover_cost));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(InventoryError::MuOutOfRange(self.mu));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(InventoryError::NonPositiveAlpha(self.alpha));
        }
        if self.y_max == 0 {
            return Err(InventoryError::ZeroYMax);
        }
        Ok(())
    }

    /// Per-item turnover cost `B√μ`.
    pub fn unit_turnover_cost(&self) -> f64 {
        self.turnover_cost * self.mu.sqrt()
    }

    /// Profit added by extending the stock from `y - 1` to `y` items, before turnover cost.
    pub fn marginal_profit(&self, y: u64) -> f64 {
        self.profit_per_item * (y as f64).powf(-self.alpha)
    }
}

/// Profit of stocking the top `y` items: `A·Σ_{i=1..y} i^-α - B·y·√μ`.
pub fn objective(y: u64, params: &InventoryParams) -> f64 {
    let head: f64 = (1..=y).map(|i| (i as f64).powf(-params.alpha)).sum();
    params.profit_per_item * head - y as f64 * params.unit_turnover_cost()
}

/// Published closed-form optimum, unrounded and floored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperOptimum {
    pub value: f64,
    pub floored: u64,
}

/// `y = (A / (B√μ))^(1/(α+1))`, with `A = 0` giving 0.
pub fn optimal_y_paper(params: &InventoryParams) -> PaperOptimum {
    if params.profit_per_item == 0.0 {
        return PaperOptimum { value: 0.0, floored: 0 };
    }
    let value = (params.profit_per_item / params.unit_turnover_cost()).powf(1.0 / (params.alpha + 1.0));
    PaperOptimum {
        value,
        floored: value.floor().max(0.0) as u64,
    }
}

/// Continuous solution of `A·y^-α = B√μ`, i.e. `(A / (B√μ))^(1/α)`.
pub fn optimal_y_marginal(params: &InventoryParams) -> f64 {
    if params.profit_per_item == 0.0 {
        return 0.0;
    }
    (params.profit_per_item / params.unit_turnover_cost()).powf(1.0 / params.alpha)
}

/// `A/B` needed for the closed form to reach stock `y`: `y^(α+1)·√μ`.
pub fn ab_ratio_for_stock(y: f64, mu: f64, alpha: f64) -> f64 {
    y.powf(alpha + 1.0) * mu.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InventoryResult {
    pub y_paper_value: f64,
    pub y_paper: u64,
    pub y_marginal_value: f64,
    pub y_bruteforce: u64,
    pub objective_at_optimum: f64,
    /// True when the search stopped at `y_max` with the marginal gain still positive.
    pub y_max_binding: bool,
}

impl InventoryResult {
    pub fn closed_form_disagrees(&self) -> bool {
        self.y_paper != self.y_bruteforce
    }
}

/// Exact integer argmax of [`objective`] over `0..=y_max`, ties toward the
/// smaller stock.
///
/// The marginal gain `A·y^-α - B√μ` strictly decreases in `y`, so the scan
/// stops at the first rank that does not pay for itself.
pub fn optimal_y_bruteforce(params: &InventoryParams) -> InventoryResult {
    let cost = params.unit_turnover_cost();
    let mut best = 0u64;
    let mut value = 0.0f64;
    let mut head = 0.0f64;
    let mut binding = true;
    for y in 1..=params.y_max {
        let term = (y as f64).powf(-params.alpha);
        if params.profit_per_item * term - cost <= 0.0 {
            binding = false;
            break;
        }
        head += term;
        best = y;
        value = params.profit_per_item * head - y as f64 * cost;
    }
    if binding && params.marginal_profit(params.y_max + 1) <= cost {
        binding = false;
    }
    let paper = optimal_y_paper(params);
    InventoryResult {
        y_paper_value: paper.value,
        y_paper: paper.floored,
        y_marginal_value: optimal_y_marginal(params),
        y_bruteforce: best,
        objective_at_optimum: value,
        y_max_binding: binding,
    }
}

/// One point of the optimal-stock curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub ab_ratio: f64,
    pub mu: f64,
    pub y_paper_value: f64,
    pub y_paper: u64,
    pub y_bruteforce: u64,
}

/// Optimal stock over an `A/B × μ` grid with `B = 1`, rows grouped by `A/B`.
pub fn figure3_curve(
    alpha: f64,
    ab_ratios: &[f64],
    mu_grid: &[f64],
) -> Result<Vec<CurvePoint>, InventoryError> {
    let mut out = Vec::with_capacity(ab_ratios.len() * mu_grid.len());
    for &ab in ab_ratios {
        for &mu in mu_grid {
            let params = InventoryParams::new(ab, 1.0, mu, alpha)?;
            let r = optimal_y_bruteforce(&params);
            out.push(CurvePoint {
                ab_ratio: ab,
                mu,
                y_paper_value: r.y_paper_value,
                y_paper: r.y_paper,
                y_bruteforce: r.y_bruteforce,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64, mu: f64, alpha: f64) -> InventoryParams {
        InventoryParams::new(a, b, mu, alpha).unwrap()
    }

    #[test]
    fn objective_examples() {
        let p = params(10.0, 1.0, 0.25, 3.5);
        assert_eq!(objective(0, &p), 0.0);
        assert!((objective(1, &p) - 9.5).abs() < 1e-12);
        // 2^-3.5 = 1 / (8·√2)
        let oracle = 10.0 * (1.0 + 1.0 / (8.0 * 2f64.sqrt())) - 2.0 * 0.5;
        assert!((objective(2, &p) - oracle).abs() < 1e-12);
        assert!((objective(2, &p) - 9.883_883_476_483_184).abs() < 1e-12);
    }

    #[test]
    fn paper_closed_form_examples() {
        assert!((optimal_y_paper(&params(1.0, 1.0, 1.0, 3.5)).value - 1.0).abs() < 1e-15);
        let big = optimal_y_paper(&params(1e6, 1.0, 1e-4, 3.5));
        assert!((big.value - 1e8f64.powf(1.0 / 4.5)).abs() < 1e-9);
        assert_eq!(big.floored, 59);
        assert_eq!(optimal_y_paper(&params(0.0, 1.0, 0.1, 3.5)).floored, 0);
    }

    #[test]
    fn bruteforce_zero_profit() {
        let r = optimal_y_bruteforce(&params(0.0, 1.0, 0.1, 3.5));
        assert_eq!(r.y_bruteforce, 0);
        assert_eq!(r.objective_at_optimum, 0.0);
    }

    #[test]
    fn bruteforce_worked_example() {
        let p = params(10.0, 1.0, 0.25, 3.5);
        let r = optimal_y_bruteforce(&p);
        // 10·y^-3.5 > 0.5  ⇔  y < 20^(1/3.5) ≈ 2.35
        assert_eq!(r.y_bruteforce, 2);
        assert!(10.0 * 3f64.powf(-3.5) < 0.5 && 0.5 <= 10.0 * 2f64.powf(-3.5));
        assert!((r.objective_at_optimum - objective(2, &p)).abs() < 1e-12);
    }

    #[test]
    fn cost_at_or_above_profit_stocks_nothing() {
        // A - B√μ <= 0 means even rank 1 loses money.
        assert_eq!(optimal_y_bruteforce(&params(1.0, 2.0, 0.25, 2.0)).y_bruteforce, 0);
        assert_eq!(optimal_y_bruteforce(&params(1.0, 1.0, 1.0, 2.0)).y_bruteforce, 0);
        assert_eq!(optimal_y_bruteforce(&params(1.01, 1.0, 1.0, 2.0)).y_bruteforce, 1);
    }

    #[test]
    fn y_max_binding_is_flagged() {
        let p = params(1e6, 1.0, 1e-4, 1.0).with_y_max(10).unwrap();
        let r = optimal_y_bruteforce(&p);
        assert_eq!(r.y_bruteforce, 10);
        assert!(r.y_max_binding);
        let p = params(10.0, 1.0, 0.25, 3.5).with_y_max(2).unwrap();
        assert!(!optimal_y_bruteforce(&p).y_max_binding);
    }

    #[test]
    fn invalid_params() {
        assert_eq!(InventoryParams::new(1.0, 0.0, 0.1, 3.5).unwrap_err().field(), "B");
        assert_eq!(InventoryParams::new(1.0, 1.0, 0.0, 3.5).unwrap_err().field(), "mu");
        assert_eq!(InventoryParams::new(1.0, 1.0, 1.5, 3.5).unwrap_err().field(), "mu");
        assert_eq!(InventoryParams::new(-1.0, 1.0, 0.1, 3.5).unwrap_err().field(), "A");
        assert_eq!(InventoryParams::new(1.0, 1.0, 0.1, 0.0).unwrap_err().field(), "alpha");
        assert_eq!(params(1.0, 1.0, 0.1, 1.0).with_y_max(0).unwrap_err().field(), "y-max");
    }

    #[test]
    fn million_titles_needs_huge_ratio() {
        let ratio = ab_ratio_for_stock(1e6, 1e-3, 3.5);
        assert!((ratio / 3.162_277_660_168_379e25 - 1.0).abs() < 1e-12, "{ratio}");
        let back = optimal_y_paper(&params(ratio, 1.0, 1e-3, 3.5)).value;
        assert!((back / 1e6 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn curve_point_matches_direct_call() {
        let pts = figure3_curve(3.5, &[100.0], &[0.01]).unwrap();
        assert_eq!(pts.len(), 1);
        let direct = optimal_y_paper(&params(100.0, 1.0, 0.01, 3.5));
        assert_eq!(pts[0].y_paper_value, direct.value);
        assert_eq!(pts[0].y_paper, direct.floored);
    }
}
