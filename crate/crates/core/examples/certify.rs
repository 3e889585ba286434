//! Run every numerical certificate on a grid of instances.
//!
//!     cargo run --release --example certify

use silent_duel::verifier::{best_response_report, run_checks, Tolerances};
use silent_duel::{Equilibrium, GameParams};

fn main() -> Result<(), silent_duel::DuelError> {
    let tol = Tolerances::default();
    let mut all_pass = true;
    for n in [2, 3, 4, 6, 10] {
        for c in [0.0, 0.1, 1.0 / n as f64, 0.5, 0.9] {
            let eq = Equilibrium::solve(GameParams::new(n, c)?)?;
            let checks = run_checks(&eq, &tol);
            let deviation = best_response_report(&eq, 10_000)?;
            let pass = checks.pass && deviation.certified(tol.identity);
            all_pass &= pass;
            println!(
                "n={n:>2} c={c:<6.4} checks {:>2}/{:<2} max excess {:+.1e}  {}",
                checks.checks.iter().filter(|c| c.pass).count(),
                checks.checks.len(),
                deviation.max_excess,
                if pass { "ok" } else { "FAILED" }
            );
            for failure in checks.failures() {
                println!(
                    "    {} residual {:e} > {:e}",
                    failure.id, failure.residual, failure.tolerance
                );
            }
        }
    }
    if !all_pass {
        std::process::exit(1);
    }
    Ok(())
}
