//! Solve a family of instances and print p, v and b.
//!
//!     cargo run --example solve

use silent_duel::{Equilibrium, GameParams};

fn main() -> Result<(), silent_duel::DuelError> {
    println!("{:>3} {:>6} {:>10} {:>10} {:>10}", "n", "c", "p", "v", "b");
    for n in [2, 3, 4, 6, 10] {
        for c in [0.0, 1.0 / n as f64, 0.75] {
            let eq = Equilibrium::solve(GameParams::new(n, c)?)?;
            println!(
                "{n:>3} {c:>6.3} {:>10.6} {:>10.6} {:>10.6}",
                eq.p(),
                eq.v(),
                eq.b()
            );
        }
    }
    Ok(())
}
