//! Checks against independently computed references.

use rand::Rng;

use longtail_core::analysis::fit_alpha;
use longtail_core::inventory::{objective, optimal_y_bruteforce, InventoryParams};
use longtail_core::model::{rng_from_seed, run, SimConfig};

/// Continuous power law above `x_min` by inverse CDF, floored to integers.
fn power_law_samples(alpha: f64, x_min: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            x_min * (1.0 - u).powf(-1.0 / (alpha - 1.0))
        })
        .collect()
}

#[test]
fn inverse_cdf_sampler_matches_analytic_quantiles() {
    let (alpha, x_min) = (2.5, 1000.0);
    let mut xs = power_law_samples(alpha, x_min, 100_000, 1);
    xs.sort_by(f64::total_cmp);
    let median = xs[xs.len() / 2];
    let analytic_median = x_min * 2f64.powf(1.0 / (alpha - 1.0));
    assert!((median / analytic_median - 1.0).abs() < 0.02, "{median} vs {analytic_median}");
    // P(X > 10 x_min) = 10^-(α-1)
    let tail = xs.iter().filter(|&&x| x > 10.0 * x_min).count() as f64 / xs.len() as f64;
    let analytic_tail = 10f64.powf(-(alpha - 1.0));
    assert!((tail - analytic_tail).abs() < 4.0 * (analytic_tail / 1e5).sqrt() + 1e-4, "{tail}");
}

#[test]
fn mle_recovers_known_exponent() {
    let xs = power_law_samples(2.5, 1000.0, 100_000, 2);
    let ints: Vec<u64> = xs.iter().map(|&x| x.floor() as u64).collect();
    let fit = fit_alpha(&ints, 1000).unwrap();
    assert_eq!(fit.n_samples, 100_000);
    assert!((fit.alpha - 2.5).abs() < 0.05, "{}", fit.alpha);
    assert!(fit.std_error < 0.01);
}

#[test]
fn objective_matches_reverse_order_summation() {
    // Summing smallest terms first is the more accurate route.
    let p = InventoryParams::new(7.0, 0.3, 0.02, 1.7).unwrap();
    for y in [1u64, 2, 10, 100, 1000] {
        let head: f64 = (1..=y).rev().map(|i| 1.0 / (i as f64).powf(1.7)).sum();
        let oracle = 7.0 * head - y as f64 * 0.3 * 0.02f64.sqrt();
        assert!((objective(y, &p) - oracle).abs() < 1e-12, "y = {y}");
    }
}

#[test]
fn bruteforce_matches_exhaustive_scan() {
    let p = InventoryParams::new(10.0, 1.0, 0.25, 3.5).unwrap().with_y_max(1000).unwrap();
    let mut best = (0u64, 0.0f64);
    for y in 1..=1000 {
        let v = objective(y, &p);
        if v > best.1 {
            best = (y, v);
        }
    }
    let r = optimal_y_bruteforce(&p);
    assert_eq!(r.y_bruteforce, best.0);
    assert_eq!(best.0, 2);
}

#[test]
fn winner_take_all_share_exceeds_diverse_regime() {
    let share = |n_mu: f64, seed: u64| {
        let cfg = SimConfig::new(100, n_mu / 100.0, 1000, seed);
        run(&cfg, 1).unwrap().state.top_cumulative_share()
    };
    let low: Vec<f64> = (0..10).map(|s| share(0.5, s)).collect();
    let high: Vec<f64> = (0..10).map(|s| share(5.0, 100 + s)).collect();
    let max_high = high.iter().copied().fold(0.0, f64::max);
    let min_low = low.iter().copied().fold(1.0, f64::min);
    assert!(min_low > max_high, "low {low:?} high {high:?}");
}
