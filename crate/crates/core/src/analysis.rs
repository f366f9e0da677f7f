//! Statistics over simulated (or observed) sales: power-law exponent of
//! accumulated sales, best-seller list turnover, and the square-root
//! turnover rule together with its inverse.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ProductId, SimState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("s_min must be at least 1")]
    ZeroSMin,
    #[error("need at least {needed} samples at or above s_min, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("every sample equals s_min; the exponent is undefined")]
    AllAtSMin,
    #[error("need at least {needed} periods, got {got}")]
    TooFewPeriods { needed: usize, got: usize },
    #[error("need at least 3 points for a log-log fit, got {0}")]
    TooFewPoints(usize),
    #[error("log-log fit requires strictly positive finite values, got ({0}, {1})")]
    NonPositive(f64, f64),
    #[error("all x values are identical; slope is undefined")]
    DegenerateDesign,
    #[error("fractional turnover must lie in [0, 1], got {0}")]
    FractionOutOfRange(f64),
}

/// Maximum-likelihood power-law fit `P(S) ∝ S^-α` for `S >= s_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub s_min: u64,
    pub n_samples: usize,
    pub std_error: f64,
}

/// Continuous-approximation MLE: `α = 1 + n / Σ ln(s_i / s_min)` over the
/// samples `>= s_min`, with standard error `(α - 1) / √n`.
///
/// Sales are integers, so this is the continuous estimator applied to
/// discrete data and is biased for small `s_min`.
pub fn fit_alpha(samples: &[u64], s_min: u64) -> Result<PowerLawFit, AnalysisError> {
    if s_min == 0 {
        return Err(AnalysisError::ZeroSMin);
    }
    let floor = s_min as f64;
    let (n, log_sum) = samples
        .iter()
        .filter(|&&s| s >= s_min)
        .fold((0usize, 0.0f64), |(n, acc), &s| {
            (n + 1, acc + (s as f64 / floor).ln())
        });
    if n < 2 {
        return Err(AnalysisError::TooFewSamples { needed: 2, got: n });
    }
    if log_sum <= 0.0 {
        return Err(AnalysisError::AllAtSMin);
    }
    let alpha = 1.0 + n as f64 / log_sum;
    Ok(PowerLawFit {
        alpha,
        s_min,
        n_samples: n,
        std_error: (alpha - 1.0) / (n as f64).sqrt(),
    })
}

/// Ranked top-`y` lists, one per period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopYSeries {
    pub y: usize,
    pub lists: Vec<Vec<ProductId>>,
}

/// Best sellers of the current period with their sales: descending sales,
/// ties by ascending id, at most `y` entries.
pub fn ranked_top(state: &SimState, y: usize) -> Vec<(ProductId, u64)> {
    ranked_top_of(state.current_sales(), y)
}

/// Same as [`ranked_top`] over an arbitrary list of `(id, sales)` pairs.
pub fn ranked_top_of(sales: &[(ProductId, u64)], y: usize) -> Vec<(ProductId, u64)> {
    if y == 0 {
        return Vec::new();
    }
    let key = |&(id, s): &(ProductId, u64)| (std::cmp::Reverse(s), id);
    let mut best: Vec<(ProductId, u64)> = Vec::with_capacity(y.min(sales.len()) + 1);
    for entry in sales {
        if best.len() == y && key(entry) >= key(&best[y - 1]) {
            continue;
        }
        let pos = best.partition_point(|e| key(e) < key(entry));
        best.insert(pos, *entry);
        best.truncate(y);
    }
    best
}

pub fn top_y(state: &SimState, y: usize) -> Vec<ProductId> {
    ranked_top(state, y).into_iter().map(|(id, _)| id).collect()
}

/// Per-period turnover of a top-y list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverStats {
    pub y: usize,
    pub z_per_period: Vec<usize>,
    pub z_bar: f64,
    pub as_fraction: f64,
}

/// `z_t = |top(t) \ top(t-1)|` for every period after the first.
pub fn turnover(series: &TopYSeries) -> Result<TurnoverStats, AnalysisError> {
    if series.lists.len() < 2 {
        return Err(AnalysisError::TooFewPeriods {
            needed: 2,
            got: series.lists.len(),
        });
    }
    let z_per_period: Vec<usize> = series
        .lists
        .windows(2)
        .map(|w| {
            let prev: HashSet<ProductId> = w[0].iter().copied().collect();
            w[1].iter().filter(|id| !prev.contains(id)).count()
        })
        .collect();
    let z_bar = z_per_period.iter().sum::<usize>() as f64 / z_per_period.len() as f64;
    Ok(TurnoverStats {
        y: series.y,
        z_per_period,
        z_bar,
        as_fraction: z_bar / series.y as f64,
    })
}

/// Rule-of-thumb turnover `y·√μ`.
pub fn eq2_turnover(y: usize, mu: f64) -> f64 {
    y as f64 * mu.sqrt()
}

/// Innovation fraction implied by an observed turnover fraction `z/y`:
/// the square-root rule inverted, `μ = (z/y)²`.
pub fn calibrate_mu(fractional_turnover: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&fractional_turnover) {
        return Err(AnalysisError::FractionOutOfRange(fractional_turnover));
    }
    Ok(fractional_turnover * fractional_turnover)
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl LogLogFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Ordinary least squares of `ln z̄` on `ln μ`.
pub fn fit_turnover_exponent(points: &[(f64, f64)]) -> Result<LogLogFit, AnalysisError> {
    if points.len() < 3 {
        return Err(AnalysisError::TooFewPoints(points.len()));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(AnalysisError::NonPositive(x, y));
        }
        logs.push((x.ln(), y.ln()));
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(lx, ly) in &logs {
        let dx = lx - mean_x;
        let dy = ly - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(AnalysisError::DegenerateDesign);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = logs
            .iter()
            .map(|&(lx, ly)| {
                let r = ly - (intercept + slope * lx);
                r * r
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
        n_points: logs.len(),
    })
}
