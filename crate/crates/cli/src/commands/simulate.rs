use std::fs::File;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};

use longtail_core::analysis::{ranked_top, turnover, TopYSeries};
use longtail_core::{SimConfig, Simulation};

use crate::error::CliError;
use crate::format::{ensure_dir, OutputFile, Table};
use crate::manifest::RunManifest;

const DEFAULT_N: u64 = 500;
const DEFAULT_MU: f64 = 0.004;
const DEFAULT_STEPS: u64 = 1000;
const DEFAULT_Y: usize = 5;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of individuals N.
    #[arg(long)]
    pub n: Option<u64>,
    /// Innovation fraction μ in [0, 1].
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Size of the best-seller list.
    #[arg(long)]
    pub y: Option<usize>,
    /// Initial number of products (defaults to N).
    #[arg(long)]
    pub x0: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<u64>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "longtail-out")]
    pub out_dir: PathBuf,
}

/// Optional settings read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub n: Option<u64>,
    pub mu: Option<f64>,
    pub steps: Option<u64>,
    pub seed: Option<u64>,
    pub y: Option<usize>,
    pub x0: Option<u64>,
    pub burn_in: Option<u64>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    sim: SimConfig,
    y: usize,
}

fn resolve(args: &SimulateArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(path) => {
            let f = File::open(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_reader(f).map_err(|e| CliError::validation("config", e))?
        }
        None => SimulateFile::default(),
    };
    let n = args.n.or(file.n).unwrap_or(DEFAULT_N);
    let sim = SimConfig {
        n_agents: n,
        mu: args.mu.or(file.mu).unwrap_or(DEFAULT_MU),
        x0: args.x0.or(file.x0).unwrap_or(n),
        steps: args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
        seed: args.seed.or(file.seed).unwrap_or(0),
        burn_in: args.burn_in.or(file.burn_in).unwrap_or(0),
    };
    sim.validate().map_err(|e| {
        let flag = match e.field() {
            "n_agents" => "--n",
            "mu" => "--mu",
            "x0" => "--x0",
            "steps" => "--steps",
            _ => "--burn-in",
        };
        CliError::validation(flag, e)
    })?;
    let y = args.y.or(file.y).unwrap_or(DEFAULT_Y);
    if y == 0 {
        return Err(CliError::validation("--y", "must be at least 1"));
    }
    Ok(Resolved { sim, y })
}

pub fn execute(args: SimulateArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let resolved = resolve(&args)?;
    let y = resolved.y;
    ensure_dir(&args.out_dir)?;

    let mut sim = Simulation::new(resolved.sim.clone()).map_err(|e| CliError::validation(e.field(), e))?;
    let mut top = Table::new(&["period", "rank", "product_id", "sales"]);
    let mut lists = Vec::with_capacity(resolved.sim.steps as usize + 1);
    loop {
        let state = sim.state();
        let ranked = ranked_top(state, y);
        for (rank, (id, sales)) in ranked.iter().enumerate() {
            top.push(vec![
                state.period().to_string(),
                (rank + 1).to_string(),
                id.to_string(),
                sales.to_string(),
            ]);
        }
        lists.push(ranked.into_iter().map(|(id, _)| id).collect());
        if sim.is_finished() {
            break;
        }
        sim.advance();
    }

    let stats = turnover(&TopYSeries { y, lists }).map_err(|e| CliError::InsufficientData(e.to_string()))?;
    let mut z = Table::new(&["period", "z"]);
    for (t, zt) in stats.z_per_period.iter().enumerate() {
        z.push(vec![(t + 1).to_string(), zt.to_string()]);
    }

    let mut cumulative = Table::new(&["product_id", "sales"]);
    for (id, s) in sim.state().cumulative_sales() {
        cumulative.push(vec![id.to_string(), s.to_string()]);
    }

    let dir = &args.out_dir;
    let outputs = vec![
        OutputFile::new(dir.join("cumulative_sales.csv"), "cumulative_sales/v1"),
        OutputFile::new(dir.join("top_y.csv"), "top_y/v1"),
        OutputFile::new(dir.join("turnover.csv"), "turnover/v1"),
    ];
    cumulative.write(&outputs[0].path)?;
    top.write(&outputs[1].path)?;
    z.write(&outputs[2].path)?;

    let config = serde_json::to_value(&resolved).map_err(|e| CliError::validation("config", e))?;
    RunManifest::new("simulate", resolved.sim.seed, config, outputs, started.elapsed()).write(dir)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args() -> SimulateArgs {
        SimulateArgs {
            n: None,
            mu: None,
            steps: None,
            seed: None,
            y: None,
            x0: None,
            burn_in: None,
            config: None,
            out_dir: PathBuf::from("unused"),
        }
    }

    #[test]
    fn defaults_apply() {
        let r = resolve(&args()).unwrap();
        assert_eq!(r.sim, SimConfig::new(500, 0.004, 1000, 0));
        assert_eq!(r.y, 5);
    }

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"n": 200, "mu": 0.01, "seed": 9}}"#).unwrap();
        let a = SimulateArgs { config: Some(f.path().to_path_buf()), seed: Some(3), ..args() };
        let r = resolve(&a).unwrap();
        assert_eq!(r.sim.n_agents, 200);
        assert_eq!(r.sim.x0, 200);
        assert_eq!(r.sim.mu, 0.01);
        assert_eq!(r.sim.seed, 3);
    }

    #[test]
    fn invalid_mu_names_the_flag() {
        let err = resolve(&SimulateArgs { mu: Some(1.5), ..args() }).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("--mu"), "{err}");
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"nn": 200}}"#).unwrap();
        let err = resolve(&SimulateArgs { config: Some(f.path().to_path_buf()), ..args() }).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
