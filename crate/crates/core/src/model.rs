//! The random-copying ("pure fashion") choice model.
//!
//! A fixed population of `N` individuals buys exactly one product per period.
//! Each period a number of innovators (expected `μN`) each adopt a brand-new
//! product; everyone else copies a product in proportion to its sales in the
//! previous period. A product that sells nothing in a period is extinct and can
//! never be chosen again.
//!
//! All randomness flows through [`SimRng`] (ChaCha8, seeded through
//! `SeedableRng::seed_from_u64`), so a `(config, seed)` pair reproduces the same
//! trajectory on every platform. Copying draws a uniform integer in `[0, N)`
//! and locates it in the cumulative sales table of the previous period, which
//! is exactly a draw with probability `s_i / N` and involves no floating point.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{top_y, TopYSeries};

/// Random source used by every simulation in this crate.
pub type SimRng = ChaCha8Rng;

/// Builds the simulation RNG for a seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Identifier of a product. Ids are handed out in increasing order and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductId(pub u64);

impl fmt::Display for ProductId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("n_agents must be at least 1")]
    NoAgents,
    #[error("mu must lie in [0, 1], got {0}")]
    MuOutOfRange(f64),
    #[error("x0 must lie in [1, n_agents = {n_agents}], got {x0}")]
    X0OutOfRange { x0: u64, n_agents: u64 },
    #[error("steps must be at least 1")]
    NoSteps,
    #[error("burn_in ({burn_in}) must be smaller than steps ({steps})")]
    BurnInTooLong { burn_in: u64, steps: u64 },
}

impl ConfigError {
    /// Name of the offending configuration field.
    pub fn field(&self) -> &'static str {
        match self {
            ConfigError::NoAgents => "n_agents",
            ConfigError::MuOutOfRange(_) => "mu",
            ConfigError::X0OutOfRange { .. } => "x0",
            ConfigError::NoSteps => "steps",
            ConfigError::BurnInTooLong { .. } => "burn_in",
        }
    }
}

/// Parameters of a single simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_agents: u64,
    pub mu: f64,
    pub x0: u64,
    pub steps: u64,
    pub seed: u64,
    /// Number of initial periods (counting the initial period 0) left out of
    /// the cumulative sales.
    #[serde(default)]
    pub burn_in: u64,
}

impl SimConfig {
    /// Config with `x0 = n_agents` and no burn-in.
    pub fn new(n_agents: u64, mu: f64, steps: u64, seed: u64) -> Self {
        SimConfig {
            n_agents,
            mu,
            x0: n_agents,
            steps,
            seed,
            burn_in: 0,
        }
    }

    pub fn with_x0(mut self, x0: u64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_agents == 0 {
            return Err(ConfigError::NoAgents);
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(ConfigError::MuOutOfRange(self.mu));
        }
        if self.x0 == 0 || self.x0 > self.n_agents {
            return Err(ConfigError::X0OutOfRange {
                x0: self.x0,
                n_agents: self.n_agents,
            });
        }
        if self.steps == 0 {
            return Err(ConfigError::NoSteps);
        }
        if self.burn_in >= self.steps {
            return Err(ConfigError::BurnInTooLong {
                burn_in: self.burn_in,
                steps: self.steps,
            });
        }
        Ok(())
    }

    /// Product `N·μ`, the regime parameter of the model.
    pub fn n_mu(&self) -> f64 {
        self.n_agents as f64 * self.mu
    }
}

/// State of the market after some number of periods.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    period: u64,
    // Sorted by id; every entry has sales >= 1.
    current: Vec<(ProductId, u64)>,
    cumulative: BTreeMap<ProductId, u64>,
    next_product_id: u64,
    burn_in: u64,
}

impl SimState {
    /// Initial market: `x0` products with the population spread round-robin,
    /// so lower ids receive the remainder.
    pub fn init(config: &SimConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let base = config.n_agents / config.x0;
        let extra = config.n_agents % config.x0;
        let current: Vec<_> = (0..config.x0)
            .map(|i| (ProductId(i), base + u64::from(i < extra)))
            .collect();
        let mut state = SimState {
            period: 0,
            current,
            cumulative: BTreeMap::new(),
            next_product_id: config.x0,
            burn_in: config.burn_in,
        };
        state.accumulate();
        Ok(state)
    }

    /// Advances one period.
    pub fn step<R: Rng + ?Sized>(&mut self, config: &SimConfig, rng: &mut R) {
        let n = config.n_agents;
        let innovators = innovator_count(n, config.mu, rng);
        let copiers = n - innovators;

        let mut upper = Vec::with_capacity(self.current.len());
        let mut running = 0u64;
        for &(_, sales) in &self.current {
            running += sales;
            upper.push(running);
        }
        debug_assert_eq!(running, n);

        let mut counts = vec![0u64; self.current.len()];
        for _ in 0..copiers {
            let ticket = rng.random_range(0..n);
            let slot = upper.partition_point(|&u| u <= ticket);
            counts[slot] += 1;
        }

        let mut next = Vec::with_capacity(self.current.len() + innovators as usize);
        next.extend(
            self.current
                .iter()
                .zip(&counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&(id, _), &c)| (id, c)),
        );
        for _ in 0..innovators {
            next.push((ProductId(self.next_product_id), 1));
            self.next_product_id += 1;
        }
        self.current = next;
        self.period += 1;
        self.accumulate();
    }

    fn accumulate(&mut self) {
        if self.period < self.burn_in {
            return;
        }
        for &(id, sales) in &self.current {
            *self.cumulative.entry(id).or_insert(0) += sales;
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Live products and their sales this period, in ascending id order.
    pub fn current_sales(&self) -> &[(ProductId, u64)] {
        &self.current
    }

    pub fn sales_of(&self, id: ProductId) -> Option<u64> {
        self.current
            .binary_search_by_key(&id, |&(p, _)| p)
            .ok()
            .map(|i| self.current[i].1)
    }

    /// Accumulated sales of every product that sold after the burn-in,
    /// including extinct ones.
    pub fn cumulative_sales(&self) -> &BTreeMap<ProductId, u64> {
        &self.cumulative
    }

    pub fn next_product_id(&self) -> u64 {
        self.next_product_id
    }

    /// Number of products with nonzero sales this period (`x`).
    pub fn alive_count(&self) -> usize {
        self.current.len()
    }

    pub fn total_current_sales(&self) -> u64 {
        self.current.iter().map(|&(_, s)| s).sum()
    }

    /// Share of all accumulated sales captured by the single best-selling product.
    pub fn top_cumulative_share(&self) -> f64 {
        let total: u64 = self.cumulative.values().sum();
        if total == 0 {
            return 0.0;
        }
        let top = self.cumulative.values().copied().max().unwrap_or(0);
        top as f64 / total as f64
    }
}

/// Number of innovators this period: `floor(μN)` plus one more with
/// probability equal to the fractional part.
pub fn innovator_count<R: Rng + ?Sized>(n: u64, mu: f64, rng: &mut R) -> u64 {
    let expected = mu * n as f64;
    let whole = expected.floor();
    let frac = expected - whole;
    let extra = u64::from(rng.random_bool(frac));
    (whole as u64 + extra).min(n)
}

/// A run in progress: config, state and RNG stepped together.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    state: SimState,
    rng: SimRng,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self, ConfigError> {
        let state = SimState::init(&config)?;
        let rng = rng_from_seed(config.seed);
        Ok(Simulation { config, state, rng })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    /// Steps once and returns the new state.
    pub fn advance(&mut self) -> &SimState {
        self.state.step(&self.config, &mut self.rng);
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.period >= self.config.steps
    }

    pub fn into_state(self) -> SimState {
        self.state
    }
}

/// Final state of a run plus its per-period top-y lists.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: SimState,
    pub top: TopYSeries,
}

/// Runs `config.steps` periods, recording the top-`y` list of the initial
/// state and of every subsequent period (`steps + 1` lists in total).
pub fn run(config: &SimConfig, y: usize) -> Result<RunOutput, ConfigError> {
    let mut sim = Simulation::new(config.clone())?;
    let mut lists = Vec::with_capacity(config.steps as usize + 1);
    lists.push(top_y(sim.state(), y));
    while !sim.is_finished() {
        lists.push(top_y(sim.advance(), y));
    }
    Ok(RunOutput {
        state: sim.into_state(),
        top: TopYSeries { y, lists },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn sales_multiset(state: &SimState) -> Vec<u64> {
        let mut v: Vec<u64> = state.current_sales().iter().map(|&(_, s)| s).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    #[test]
    fn init_one_product_per_individual() {
        let s = SimState::init(&SimConfig::new(4, 0.1, 10, 0)).unwrap();
        assert_eq!(s.period(), 0);
        assert_eq!(s.alive_count(), 4);
        assert!(s.current_sales().iter().all(|&(_, x)| x == 1));
        assert_eq!(s.next_product_id(), 4);
    }

    #[test]
    fn init_even_split() {
        let s = SimState::init(&SimConfig::new(4, 0.1, 10, 0).with_x0(2)).unwrap();
        assert_eq!(sales_multiset(&s), vec![2, 2]);
        assert_eq!(s.next_product_id(), 2);
    }

    #[test]
    fn init_remainder_to_lowest_id() {
        let s = SimState::init(&SimConfig::new(5, 0.1, 10, 0).with_x0(2)).unwrap();
        assert_eq!(s.current_sales(), &[(ProductId(0), 3), (ProductId(1), 2)]);
    }

    #[test]
    fn invalid_configs_name_the_field() {
        let base = SimConfig::new(10, 0.1, 10, 0);
        let cases = [
            (SimConfig { n_agents: 0, x0: 0, ..base.clone() }, "n_agents"),
            (SimConfig { mu: 1.5, ..base.clone() }, "mu"),
            (SimConfig { mu: -0.1, ..base.clone() }, "mu"),
            (SimConfig { mu: f64::NAN, ..base.clone() }, "mu"),
            (base.clone().with_x0(0), "x0"),
            (base.clone().with_x0(11), "x0"),
            (SimConfig { steps: 0, ..base.clone() }, "steps"),
            (base.clone().with_burn_in(10), "burn_in"),
        ];
        for (cfg, field) in cases {
            assert_eq!(SimState::init(&cfg).unwrap_err().field(), field, "{cfg:?}");
        }
    }

    #[test]
    fn pure_copying_single_product_is_absorbing() {
        let cfg = SimConfig::new(50, 0.0, 200, 3).with_x0(1);
        let out = run(&cfg, 3).unwrap();
        assert_eq!(out.state.current_sales(), &[(ProductId(0), 50)]);
        assert_eq!(out.state.cumulative_sales()[&ProductId(0)], 50 * 201);
    }

    #[test]
    fn all_innovators_replace_everything() {
        let cfg = SimConfig::new(20, 1.0, 5, 9);
        let mut sim = Simulation::new(cfg).unwrap();
        for t in 1..=5u64 {
            let s = sim.advance();
            let ids: Vec<u64> = s.current_sales().iter().map(|&(p, _)| p.0).collect();
            let expected: Vec<u64> = (20 * t..20 * (t + 1)).collect();
            assert_eq!(ids, expected);
            assert!(s.current_sales().iter().all(|&(_, x)| x == 1));
        }
    }

    #[test]
    fn innovator_mean_matches_mu_n() {
        // Count new ids directly from consecutive states.
        let cfg = SimConfig::new(1000, 0.2, 1000, 17);
        let mut sim = Simulation::new(cfg).unwrap();
        let mut total_new = 0u64;
        for _ in 0..1000 {
            let before: BTreeSet<ProductId> =
                sim.state().current_sales().iter().map(|&(p, _)| p).collect();
            let threshold = sim.state().next_product_id();
            let after = sim.advance();
            let new = after
                .current_sales()
                .iter()
                .filter(|&&(p, _)| p.0 >= threshold)
                .inspect(|&&(p, _)| assert!(!before.contains(&p)))
                .count();
            total_new += new as u64;
        }
        let mean = total_new as f64 / 1000.0;
        assert!((195.0..=205.0).contains(&mean), "mean innovators {mean}");
    }

    #[test]
    fn fractional_mu_n_is_unbiased() {
        let mut rng = rng_from_seed(5);
        let draws = 20_000;
        let total: u64 = (0..draws).map(|_| innovator_count(10, 0.25, &mut rng)).sum();
        let mean = total as f64 / draws as f64;
        // Bernoulli(0.5) added to 2: sd of the mean is 0.5 / sqrt(20000).
        assert!((mean - 2.5).abs() < 0.02, "{mean}");
    }

    #[test]
    fn same_seed_same_run() {
        let cfg = SimConfig::new(100, 0.01, 10, 42);
        let a = run(&cfg, 5).unwrap();
        let b = run(&cfg, 5).unwrap();
        assert_eq!(a.state.cumulative_sales(), b.state.cumulative_sales());
        assert_eq!(a.top.lists, b.top.lists);
    }

    #[test]
    fn burn_in_excludes_early_periods() {
        let cfg = SimConfig::new(30, 0.0, 10, 1).with_x0(1).with_burn_in(4);
        let out = run(&cfg, 1).unwrap();
        // Periods 4..=10 are counted.
        assert_eq!(out.state.cumulative_sales()[&ProductId(0)], 30 * 7);
    }

    #[test]
    fn run_records_every_period() {
        let out = run(&SimConfig::new(40, 0.05, 25, 2), 5).unwrap();
        assert_eq!(out.top.lists.len(), 26);
        assert_eq!(out.state.period(), 25);
    }
}
