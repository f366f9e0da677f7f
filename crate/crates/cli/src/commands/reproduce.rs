use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::json;

use longtail_core::experiments::{
    default_ab_ratios, default_inventory_mu_grid, run_figure2_left, run_figure2_right, run_figure3,
    ExperimentError, Regime, SalesDistributionSpec, SweepSpec, DEFAULT_N_MU_TARGETS,
};
use longtail_core::inventory::BOOK_SALES_ALPHA;

use crate::error::CliError;
use crate::format::{ensure_dir, float, write_text, OutputFile, Table};
use crate::manifest::RunManifest;
use crate::svg::{LogLogPlot, Series, Style};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Accumulated sales distributions for several Nμ.
    #[value(name = "2left")]
    SalesDistribution,
    /// Top-5 turnover against μ.
    #[value(name = "2right")]
    Turnover,
    /// Optimal stock against μ for several A/B.
    #[value(name = "3")]
    Inventory,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long, default_value = "longtail-out")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replicates per cell (default 10).
    #[arg(long)]
    pub runs: Option<usize>,
    /// Periods per run (default 1000).
    #[arg(long)]
    pub steps: Option<u64>,
}

fn experiment_error(e: ExperimentError) -> CliError {
    match e {
        ExperimentError::Analysis(a) => CliError::InsufficientData(a.to_string()),
        other => CliError::validation("experiment", other),
    }
}

pub fn execute(args: ReproduceArgs) -> Result<(), CliError> {
    let started = Instant::now();
    ensure_dir(&args.out_dir)?;
    let (config, outputs) = match args.figure {
        Figure::SalesDistribution => sales_distribution(&args)?,
        Figure::Turnover => turnover_sweep(&args)?,
        Figure::Inventory => inventory(&args.out_dir)?,
    };
    RunManifest::new("reproduce", args.seed, config, outputs, started.elapsed()).write(&args.out_dir)
}

fn sales_distribution(args: &ReproduceArgs) -> Result<(serde_json::Value, Vec<OutputFile>), CliError> {
    let defaults = SalesDistributionSpec::default();
    let spec = SalesDistributionSpec {
        steps: args.steps.unwrap_or(defaults.steps),
        replicates: args.runs.unwrap_or(defaults.replicates),
        master_seed: args.seed,
        ..defaults
    };
    let results = run_figure2_left(&DEFAULT_N_MU_TARGETS, &spec).map_err(experiment_error)?;

    let mut hist = Table::new(&["n_mu", "mu", "lower", "upper", "count", "density"]);
    let mut samples = Table::new(&["n_mu", "sales"]);
    let mut fits = Table::new(&[
        "n_mu",
        "mu",
        "regime",
        "alpha",
        "s_min",
        "n_samples",
        "std_error",
        "median_top_share",
        "products_created",
    ]);
    let mut series = Vec::new();
    for d in &results {
        for b in &d.histogram {
            hist.push(vec![
                float(d.n_mu),
                float(d.mu),
                b.lower.to_string(),
                b.upper.to_string(),
                b.count.to_string(),
                float(b.density),
            ]);
        }
        for s in &d.samples {
            samples.push(vec![float(d.n_mu), s.to_string()]);
        }
        let regime = match d.regime {
            Regime::WinnerTakeAll => "winner_take_all",
            Regime::PowerLaw => "power_law",
        };
        let (alpha, s_min, n, se) = match &d.fit {
            Some(f) => (float(f.alpha), f.s_min.to_string(), f.n_samples.to_string(), float(f.std_error)),
            None => Default::default(),
        };
        fits.push(vec![
            float(d.n_mu),
            float(d.mu),
            regime.to_string(),
            alpha,
            s_min,
            n,
            se,
            float(d.median_top_share()),
            d.products_created.to_string(),
        ]);
        let label = match &d.fit {
            Some(f) => format!("Nμ = {} (α = {:.2})", d.n_mu, f.alpha),
            None => format!("Nμ = {} (winner-take-all)", d.n_mu),
        };
        let pts = d
            .histogram
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| (((b.lower * (b.upper - 1)) as f64).sqrt().max(b.lower as f64), b.density))
            .collect();
        series.push(Series::new(label, pts, Style::LineAndMarkers));
    }

    let dir = &args.out_dir;
    let outputs = vec![
        OutputFile::new(dir.join("figure2_left_histogram.csv"), "figure2_left_histogram/v1"),
        OutputFile::new(dir.join("figure2_left_samples.csv"), "figure2_left_samples/v1"),
        OutputFile::new(dir.join("figure2_left_fits.csv"), "figure2_left_fits/v1"),
        OutputFile::new(dir.join("figure2_left.svg"), "svg"),
    ];
    hist.write(&outputs[0].path)?;
    samples.write(&outputs[1].path)?;
    fits.write(&outputs[2].path)?;
    let plot = LogLogPlot {
        title: format!("Accumulated sales, N = {}", spec.n_agents),
        x_label: "accumulated sales S".into(),
        y_label: "P(S)".into(),
        series,
    };
    write_text(&outputs[3].path, &plot.render())?;
    let config = json!({
        "figure": "2left",
        "n_mu_targets": DEFAULT_N_MU_TARGETS,
        "spec": spec,
    });
    Ok((config, outputs))
}

fn turnover_sweep(args: &ReproduceArgs) -> Result<(serde_json::Value, Vec<OutputFile>), CliError> {
    let defaults = SweepSpec::default();
    let spec = SweepSpec {
        steps: args.steps.unwrap_or(defaults.steps),
        runs_per_cell: args.runs.unwrap_or(defaults.runs_per_cell),
        master_seed: args.seed,
        ..defaults
    };
    let sweep = run_figure2_right(&spec).map_err(experiment_error)?;
    let result = &sweep.result;

    let mut cells = Table::new(&["n_agents", "mu", "z_bar", "z_bar_std", "sqrt_rule"]);
    for c in &result.cells {
        cells.push(vec![
            c.n_agents.to_string(),
            float(c.mu),
            float(c.z_bar),
            float(c.z_bar_std),
            float(longtail_core::analysis::eq2_turnover(result.y, c.mu)),
        ]);
    }
    let mut runs = Table::new(&["cell", "replicate", "n_agents", "mu", "seed", "z_bar"]);
    for r in &result.runs {
        runs.push(vec![
            r.cell.to_string(),
            r.replicate.to_string(),
            r.n_agents.to_string(),
            float(r.mu),
            r.seed.to_string(),
            float(r.z_bar),
        ]);
    }
    let mut per_mu = Table::new(&["mu", "z_bar_mean", "z_bar_std_across_n", "coefficient_of_variation", "sqrt_rule"]);
    for m in &result.per_mu {
        per_mu.push(vec![
            float(m.mu),
            float(m.z_bar_mean),
            float(m.z_bar_std_across_n),
            float(m.coefficient_of_variation),
            float(m.sqrt_rule),
        ]);
    }
    let mut fit = Table::new(&["slope", "intercept", "r_squared", "n_points"]);
    fit.push(vec![
        float(sweep.fit.slope),
        float(sweep.fit.intercept),
        float(sweep.fit.r_squared),
        sweep.fit.n_points.to_string(),
    ]);

    let mus: Vec<f64> = result.per_mu.iter().map(|m| m.mu).collect();
    let plot = LogLogPlot {
        title: format!("Top-{} turnover", result.y),
        x_label: "innovation fraction μ".into(),
        y_label: "mean turnover z̄".into(),
        series: vec![
            Series::new("cells", result.cells.iter().map(|c| (c.mu, c.z_bar)).collect(), Style::Markers),
            Series::new(
                "mean over N",
                result.per_mu.iter().map(|m| (m.mu, m.z_bar_mean)).collect(),
                Style::LineAndMarkers,
            ),
            Series::new(
                format!("fit ∝ μ^{:.2} (r² = {:.3})", sweep.fit.slope, sweep.fit.r_squared),
                mus.iter().map(|&m| (m, sweep.fit.predict(m))).collect(),
                Style::Line,
            ),
            Series::new("y√μ", result.per_mu.iter().map(|m| (m.mu, m.sqrt_rule)).collect(), Style::Line),
        ],
    };

    let dir = &args.out_dir;
    let outputs = vec![
        OutputFile::new(dir.join("figure2_right_cells.csv"), "figure2_right_cells/v1"),
        OutputFile::new(dir.join("figure2_right_runs.csv"), "figure2_right_runs/v1"),
        OutputFile::new(dir.join("figure2_right_per_mu.csv"), "figure2_right_per_mu/v1"),
        OutputFile::new(dir.join("figure2_right_fit.csv"), "figure2_right_fit/v1"),
        OutputFile::new(dir.join("figure2_right.svg"), "svg"),
    ];
    cells.write(&outputs[0].path)?;
    runs.write(&outputs[1].path)?;
    per_mu.write(&outputs[2].path)?;
    fit.write(&outputs[3].path)?;
    write_text(&outputs[4].path, &plot.render())?;
    Ok((json!({ "figure": "2right", "spec": spec }), outputs))
}

fn inventory(dir: &Path) -> Result<(serde_json::Value, Vec<OutputFile>), CliError> {
    let ratios = default_ab_ratios();
    let mu_grid = default_inventory_mu_grid();
    let points = run_figure3(BOOK_SALES_ALPHA, &ratios, &mu_grid).map_err(experiment_error)?;

    let mut table = Table::new(&["ab_ratio", "mu", "y_paper_value", "y_paper", "y_bruteforce"]);
    for p in &points {
        table.push(vec![
            float(p.ab_ratio),
            float(p.mu),
            float(p.y_paper_value),
            p.y_paper.to_string(),
            p.y_bruteforce.to_string(),
        ]);
    }
    let series = ratios
        .iter()
        .map(|&ab| {
            let pts = points
                .iter()
                .filter(|p| p.ab_ratio == ab)
                .map(|p| (p.mu, p.y_paper_value))
                .collect();
            Series::new(format!("A/B = {ab:e}"), pts, Style::LineAndMarkers)
        })
        .collect();
    let plot = LogLogPlot {
        title: format!("Optimal inventory, α = {BOOK_SALES_ALPHA}"),
        x_label: "innovation fraction μ".into(),
        y_label: "optimal stock y".into(),
        series,
    };

    let outputs = vec![
        OutputFile::new(dir.join("figure3.csv"), "figure3/v1"),
        OutputFile::new(dir.join("figure3.svg"), "svg"),
    ];
    table.write(&outputs[0].path)?;
    write_text(&outputs[1].path, &plot.render())?;
    let config = json!({
        "figure": "3",
        "alpha": BOOK_SALES_ALPHA,
        "ab_ratios": ratios,
        "mu_grid": mu_grid,
    });
    Ok((config, outputs))
}
