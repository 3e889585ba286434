//! Monte Carlo tournament under the equilibrium strategy, compared with the
//! analytic value.
//!
//!     cargo run --release --example tournament -- [N] [C] [ROUNDS] [SEED]

use silent_duel::tournament::{play_round, simulate};
use silent_duel::{rng, Equilibrium, FiringStrategy, GameParams};

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args()
        .nth(i)
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

fn main() -> Result<(), silent_duel::DuelError> {
    let n = arg(1, 3usize);
    let c = arg(2, 0.2f64);
    let rounds = arg(3, 200_000u64);
    let seed = arg(4, 42u64);

    let eq = Equilibrium::solve(GameParams::new(n, c)?)?;
    let strategy = FiringStrategy::new(eq);

    let sample = play_round(&strategy, &mut rng::substream(seed, 0));
    println!("round 0 of seed {seed}:");
    for i in 0..n {
        println!(
            "  player {i}: fires at {:.4}, {:>4}, payoff {:.3}",
            sample.distances[i],
            if sample.hits[i] { "hit" } else { "miss" },
            sample.payoffs[i]
        );
    }

    let stats = simulate(&strategy, rounds, seed)?;
    println!(
        "\n{rounds} rounds, v = {:.6}, p^n = {:.6}",
        eq.v(),
        eq.p().powi(n as i32)
    );
    for (i, (m, se)) in stats.mean_payoff.iter().zip(&stats.std_error).enumerate() {
        println!(
            "  player {i}: mean {m:.6} ± {se:.6}  (z = {:+.2})",
            (m - eq.v()) / se
        );
    }
    println!(
        "  all missed: {:.6} ± {:.6}",
        stats.all_miss_freq, stats.all_miss_std_error
    );
    Ok(())
}
