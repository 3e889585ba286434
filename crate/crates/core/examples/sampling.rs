//! Draw firing distances by inverse transform and compare the empirical
//! distribution with the closed-form CDF.
//!
//!     cargo run --release --example sampling

use silent_duel::{rng, Equilibrium, FiringStrategy, GameParams};

fn main() -> Result<(), silent_duel::DuelError> {
    let strategy = FiringStrategy::new(Equilibrium::solve(GameParams::new(4, 0.25)?)?);
    let b = strategy.equilibrium().b();
    let draws = 100_000;
    let mut rng = rng::master(7);
    let mut xs: Vec<f64> = (0..draws)
        .map(|_| strategy.sample_firing_distance(&mut rng))
        .collect();
    xs.sort_by(f64::total_cmp);

    println!("{:>6} {:>10} {:>10}", "x", "G(x)", "empirical");
    for k in 0..=8 {
        let x = b * k as f64 / 8.0;
        let below = xs.partition_point(|&s| s <= x) as f64 / draws as f64;
        println!("{x:>6.3} {:>10.6} {below:>10.6}", strategy.firing_cdf(x)?);
    }
    for q in [0.1, 0.5, 0.9] {
        println!("quantile {q}: {:.6}", strategy.firing_quantile(q)?);
    }
    Ok(())
}
