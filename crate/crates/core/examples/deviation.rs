//! Payoff of a single player who abandons the equilibrium for a fixed firing
//! distance: analytic curve against simulation.
//!
//!     cargo run --release --example deviation -- [N] [C]

use silent_duel::tournament::simulate_deviation;
use silent_duel::verifier::deviation_payoff;
use silent_duel::{Equilibrium, FiringStrategy, GameParams};

fn main() -> Result<(), silent_duel::DuelError> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let c: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let eq = Equilibrium::solve(GameParams::new(n, c)?)?;
    let strategy = FiringStrategy::new(eq);

    println!("n = {n}, c = {c}: v = {:.6}, b = {:.6}", eq.v(), eq.b());
    println!(
        "{:>7} {:>10} {:>10} {:>9}",
        "y", "analytic", "simulated", "std err"
    );
    for k in 0..=10 {
        let y = 0.095 * k as f64;
        let analytic = deviation_payoff(&eq, y)?;
        let stats = simulate_deviation(&strategy, y, 100_000, k)?;
        let (mean, se) = stats.focal();
        let mark = if y > eq.b() { "  (beyond support)" } else { "" };
        println!("{y:>7.3} {analytic:>10.6} {mean:>10.6} {se:>9.6}{mark}");
    }
    Ok(())
}
