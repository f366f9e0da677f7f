//! Ensemble drivers: accumulated-sales distributions across `Nμ` regimes,
//! the turnover-versus-innovation sweep, and the optimal-stock curves.
//!
//! Runs are independent and executed on the rayon pool; results are
//! collected in (cell, replicate) order, so output never depends on
//! scheduling. Per-run seeds come from [`derive_seed`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, fit_alpha, fit_turnover_exponent, turnover, AnalysisError, LogLogFit, PowerLawFit};
use crate::inventory::{self, CurvePoint, InventoryError};
use crate::model::{run, ConfigError, SimConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid simulation config: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Inventory(#[from] InventoryError),
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("runs per cell must be at least 1")]
    NoReplicates,
    #[error("target Nμ = {target} needs μ = {mu} > 1 at N = {n}")]
    TargetUnreachable { target: f64, n: u64, mu: f64 },
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replicate `replicate` of cell `cell`.
///
/// For a fixed master seed the map is injective over `(cell, replicate)`
/// with both below 2^32: the packed index goes through two bijective
/// splitmix64 rounds.
pub fn derive_seed(master_seed: u64, cell: usize, replicate: usize) -> u64 {
    let index = ((cell as u64) << 32) | (replicate as u64 & 0xFFFF_FFFF);
    splitmix64(master_seed.wrapping_add(splitmix64(index)))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

// ---------------------------------------------------------------------------
// Accumulated sales distributions
// ---------------------------------------------------------------------------

/// Shared settings for the accumulated-sales experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalesDistributionSpec {
    pub n_agents: u64,
    pub steps: u64,
    pub replicates: usize,
    pub master_seed: u64,
    pub s_min: u64,
}

impl Default for SalesDistributionSpec {
    fn default() -> Self {
        SalesDistributionSpec {
            n_agents: 500,
            steps: 1000,
            replicates: 10,
            master_seed: 0,
            s_min: 1,
        }
    }
}

pub const DEFAULT_N_MU_TARGETS: [f64; 4] = [0.5, 2.0, 5.0, 20.0];

/// One logarithmic bin `[lower, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBin {
    pub lower: u64,
    pub upper: u64,
    pub count: u64,
    /// `count / (total · width)`.
    pub density: f64,
}

/// Histogram with bin edges `1, 2, 4, 8, …`.
pub fn log_histogram(samples: &[u64]) -> Vec<LogBin> {
    let positive: Vec<u64> = samples.iter().copied().filter(|&s| s > 0).collect();
    let Some(&max) = positive.iter().max() else {
        return Vec::new();
    };
    let total = positive.len() as f64;
    let mut bins = Vec::new();
    let mut lower = 1u64;
    while lower <= max {
        let upper = lower.saturating_mul(2);
        let count = positive.iter().filter(|&&s| s >= lower && s < upper).count() as u64;
        bins.push(LogBin {
            lower,
            upper,
            count,
            density: count as f64 / (total * (upper - lower) as f64),
        });
        lower = upper;
    }
    bins
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Nμ <= 1`: one product takes almost all sales; no power law to fit.
    WinnerTakeAll,
    PowerLaw,
}

impl Regime {
    pub fn of(n_mu: f64) -> Self {
        if n_mu <= 1.0 {
            Regime::WinnerTakeAll
        } else {
            Regime::PowerLaw
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalesDistribution {
    pub n_mu: f64,
    pub n_agents: u64,
    pub mu: f64,
    pub regime: Regime,
    /// Accumulated sales of every product, pooled over replicates in run order.
    pub samples: Vec<u64>,
    pub histogram: Vec<LogBin>,
    /// Pooled MLE; `None` in the winner-take-all regime or when the fit is undefined.
    pub fit: Option<PowerLawFit>,
    pub top_share_per_run: Vec<f64>,
    pub products_created: u64,
}

impl SalesDistribution {
    pub fn median_top_share(&self) -> f64 {
        median(&self.top_share_per_run)
    }
}

/// Accumulated-sales distribution for each target `Nμ` at fixed `N`.
pub fn run_figure2_left(
    n_mu_targets: &[f64],
    spec: &SalesDistributionSpec,
) -> Result<Vec<SalesDistribution>, ExperimentError> {
    if n_mu_targets.is_empty() {
        return Err(ExperimentError::EmptyGrid("Nμ target"));
    }
    if spec.replicates == 0 {
        return Err(ExperimentError::NoReplicates);
    }
    let mut out = Vec::with_capacity(n_mu_targets.len());
    for (cell, &target) in n_mu_targets.iter().enumerate() {
        let mu = target / spec.n_agents as f64;
        if !(0.0..=1.0).contains(&mu) {
            return Err(ExperimentError::TargetUnreachable { target, n: spec.n_agents, mu });
        }
        let configs: Vec<SimConfig> = (0..spec.replicates)
            .map(|r| SimConfig::new(spec.n_agents, mu, spec.steps, derive_seed(spec.master_seed, cell, r)))
            .collect();
        for c in &configs {
            c.validate()?;
        }
        let runs: Vec<(Vec<u64>, f64, u64)> = configs
            .par_iter()
            .map(|c| {
                let state = run(c, 1).expect("validated").state;
                let samples: Vec<u64> = state.cumulative_sales().values().copied().collect();
                (samples, state.top_cumulative_share(), state.next_product_id())
            })
            .collect();

        let mut samples = Vec::new();
        let mut shares = Vec::with_capacity(runs.len());
        let mut created = 0;
        for (s, share, ids) in runs {
            samples.extend(s);
            shares.push(share);
            created += ids;
        }
        let regime = Regime::of(target);
        let fit = match regime {
            Regime::WinnerTakeAll => None,
            Regime::PowerLaw => fit_alpha(&samples, spec.s_min).ok(),
        };
        out.push(SalesDistribution {
            n_mu: target,
            n_agents: spec.n_agents,
            mu,
            regime,
            histogram: log_histogram(&samples),
            samples,
            fit,
            top_share_per_run: shares,
            products_created: created,
        });
    }
    Ok(out)
}

/// Median top-1 accumulated share over `replicates` runs at each of two `Nμ` values.
pub fn winner_take_all_contrast(
    n_agents: u64,
    steps: u64,
    replicates: usize,
    low_n_mu: f64,
    high_n_mu: f64,
    master_seed: u64,
) -> Result<(f64, f64), ExperimentError> {
    let spec = SalesDistributionSpec {
        n_agents,
        steps,
        replicates,
        master_seed,
        s_min: 1,
    };
    let d = run_figure2_left(&[low_n_mu, high_n_mu], &spec)?;
    Ok((d[0].median_top_share(), d[1].median_top_share()))
}

// ---------------------------------------------------------------------------
// Turnover sweep
// ---------------------------------------------------------------------------

/// `N ∈ {100, 200, …, 1000}`.
pub fn default_n_grid() -> Vec<u64> {
    (1..=10).map(|k| 100 * k).collect()
}

pub fn default_mu_grid() -> Vec<f64> {
    vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_grid: Vec<u64>,
    pub mu_grid: Vec<f64>,
    pub runs_per_cell: usize,
    pub steps: u64,
    pub y: usize,
    pub master_seed: u64,
    /// Fit α to each run's accumulated sales at this `s_min`.
    #[serde(default)]
    pub fit_alpha_s_min: Option<u64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            n_grid: default_n_grid(),
            mu_grid: default_mu_grid(),
            runs_per_cell: 10,
            steps: 1000,
            y: 5,
            master_seed: 0,
            fit_alpha_s_min: None,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_grid.is_empty() {
            return Err(ExperimentError::EmptyGrid("N"));
        }
        if self.mu_grid.is_empty() {
            return Err(ExperimentError::EmptyGrid("μ"));
        }
        if self.runs_per_cell == 0 {
            return Err(ExperimentError::NoReplicates);
        }
        Ok(())
    }

    /// Cells in N-major order; the position is the cell index used for seeding.
    pub fn cells(&self) -> Vec<(u64, f64)> {
        self.n_grid
            .iter()
            .flat_map(|&n| self.mu_grid.iter().map(move |&mu| (n, mu)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cell: usize,
    pub replicate: usize,
    pub n_agents: u64,
    pub mu: f64,
    pub seed: u64,
    pub z_bar: f64,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub n_agents: u64,
    pub mu: f64,
    /// Mean of the replicates' z̄.
    pub z_bar: f64,
    pub z_bar_std: f64,
}

/// Spread of cell means across population sizes at one μ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuSummary {
    pub mu: f64,
    pub z_bar_mean: f64,
    pub z_bar_std_across_n: f64,
    pub coefficient_of_variation: f64,
    /// `y·√μ`.
    pub sqrt_rule: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub y: usize,
    pub cells: Vec<CellRecord>,
    pub runs: Vec<RunRecord>,
    pub per_mu: Vec<MuSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverSweep {
    pub result: SweepResult,
    /// Log-log fit of cell z̄ against μ over all cells.
    pub fit: LogLogFit,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    spec.validate()?;
    let cells = spec.cells();
    let jobs: Vec<(usize, usize, SimConfig)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, &(n, mu))| {
            (0..spec.runs_per_cell).map(move |r| {
                (ci, r, SimConfig::new(n, mu, spec.steps, derive_seed(spec.master_seed, ci, r)))
            })
        })
        .collect();
    for (_, _, c) in &jobs {
        c.validate()?;
    }

    let runs: Vec<RunRecord> = jobs
        .par_iter()
        .map(|(ci, r, cfg)| -> Result<RunRecord, ExperimentError> {
            let out = run(cfg, spec.y)?;
            let z = turnover(&out.top)?;
            let alpha = spec.fit_alpha_s_min.and_then(|s_min| {
                let samples: Vec<u64> = out.state.cumulative_sales().values().copied().collect();
                fit_alpha(&samples, s_min).ok().map(|f| f.alpha)
            });
            Ok(RunRecord {
                cell: *ci,
                replicate: *r,
                n_agents: cfg.n_agents,
                mu: cfg.mu,
                seed: cfg.seed,
                z_bar: z.z_bar,
                alpha,
            })
        })
        .collect::<Result<_, _>>()?;

    let cell_records: Vec<CellRecord> = cells
        .iter()
        .enumerate()
        .map(|(ci, &(n, mu))| {
            let zs: Vec<f64> = runs.iter().filter(|r| r.cell == ci).map(|r| r.z_bar).collect();
            CellRecord {
                n_agents: n,
                mu,
                z_bar: mean(&zs),
                z_bar_std: sample_std(&zs),
            }
        })
        .collect();

    let per_mu = spec
        .mu_grid
        .iter()
        .map(|&mu| {
            let zs: Vec<f64> = cell_records.iter().filter(|c| c.mu == mu).map(|c| c.z_bar).collect();
            let m = mean(&zs);
            let sd = sample_std(&zs);
            MuSummary {
                mu,
                z_bar_mean: m,
                z_bar_std_across_n: sd,
                coefficient_of_variation: sd / m,
                sqrt_rule: analysis::eq2_turnover(spec.y, mu),
            }
        })
        .collect();

    Ok(SweepResult {
        y: spec.y,
        cells: cell_records,
        runs,
        per_mu,
    })
}

/// Turnover sweep plus the pooled log-log fit of z̄ against μ.
pub fn run_figure2_right(spec: &SweepSpec) -> Result<TurnoverSweep, ExperimentError> {
    let result = run_sweep(spec)?;
    let points: Vec<(f64, f64)> = result.cells.iter().map(|c| (c.mu, c.z_bar)).collect();
    let fit = fit_turnover_exponent(&points)?;
    Ok(TurnoverSweep { result, fit })
}

// ---------------------------------------------------------------------------
// Optimal stock
// ---------------------------------------------------------------------------

pub fn default_ab_ratios() -> Vec<f64> {
    vec![10.0, 100.0, 1e3, 1e4, 1e5, 1e6]
}

/// 25 log-spaced values from 10^-4 to 0.5.
pub fn default_inventory_mu_grid() -> Vec<f64> {
    let lo = 1e-4f64.ln();
    let hi = 0.5f64.ln();
    let k = 25;
    (0..k)
        .map(|i| {
            if i == k - 1 {
                0.5
            } else if i == 0 {
                1e-4
            } else {
                (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn run_figure3(alpha: f64, ab_ratios: &[f64], mu_grid: &[f64]) -> Result<Vec<CurvePoint>, ExperimentError> {
    if ab_ratios.is_empty() {
        return Err(ExperimentError::EmptyGrid("A/B"));
    }
    if mu_grid.is_empty() {
        return Err(ExperimentError::EmptyGrid("μ"));
    }
    Ok(inventory::figure3_curve(alpha, ab_ratios, mu_grid)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn seeds_distinct_over_grid() {
        let mut seen = HashSet::new();
        for cell in 0..200 {
            for rep in 0..50 {
                assert!(seen.insert(derive_seed(7, cell, rep)));
            }
        }
        assert_eq!(derive_seed(7, 3, 4), derive_seed(7, 3, 4));
        assert_ne!(derive_seed(7, 3, 4), derive_seed(8, 3, 4));
    }

    #[test]
    fn histogram_bins() {
        let bins = log_histogram(&[1, 1, 2, 3, 4, 9]);
        let edges: Vec<(u64, u64, u64)> = bins.iter().map(|b| (b.lower, b.upper, b.count)).collect();
        assert_eq!(edges, vec![(1, 2, 2), (2, 4, 2), (4, 8, 1), (8, 16, 1)]);
        let mass: f64 = bins.iter().map(|b| b.density * (b.upper - b.lower) as f64).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(log_histogram(&[]).is_empty());
    }

    #[test]
    fn median_and_std() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!((sample_std(&[1.0, 2.0, 3.0, 4.0]) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(sample_std(&[1.0]), 0.0);
    }

    #[test]
    fn inventory_mu_grid_endpoints() {
        let g = default_inventory_mu_grid();
        assert_eq!(g[0], 1e-4);
        assert_eq!(*g.last().unwrap(), 0.5);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sweep_shapes() {
        let spec = SweepSpec {
            n_grid: vec![50, 80],
            mu_grid: vec![0.01, 0.05, 0.1],
            runs_per_cell: 2,
            steps: 50,
            y: 3,
            master_seed: 11,
            fit_alpha_s_min: Some(1),
        };
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.cells.len(), 6);
        assert_eq!(r.runs.len(), 12);
        assert_eq!(r.per_mu.len(), 3);
        assert!(r.runs.iter().all(|x| x.alpha.is_some()));
        assert!(r.runs.iter().all(|x| x.z_bar >= 0.0 && x.z_bar <= 3.0));
    }

    #[test]
    fn unreachable_target() {
        let spec = SalesDistributionSpec { n_agents: 10, ..Default::default() };
        assert!(matches!(
            run_figure2_left(&[20.0], &spec),
            Err(ExperimentError::TargetUnreachable { .. })
        ));
    }

    #[test]
    fn empty_grids_rejected() {
        let spec = SweepSpec { mu_grid: vec![], ..Default::default() };
        assert_eq!(run_sweep(&spec).unwrap_err(), ExperimentError::EmptyGrid("μ"));
        assert!(run_figure3(3.5, &[], &[0.1]).is_err());
    }
}
