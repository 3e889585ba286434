use silent_duel::rng;
use silent_duel::tournament::{play_round, simulate, simulate_deviation, Simulation};
use silent_duel::verifier::deviation_payoff;
use silent_duel::{Equilibrium, FiringStrategy, GameParams};

fn strategy(n: usize, c: f64) -> FiringStrategy {
    Equilibrium::solve(GameParams::new(n, c).unwrap())
        .unwrap()
        .into()
}

#[test]
fn round_payoffs_are_conserved() {
    let s = strategy(4, 0.15);
    for r in 0..2000 {
        let out = play_round(&s, &mut rng::substream(3, r));
        let total: f64 = out.payoffs.iter().sum();
        let expected = if out.all_missed() { 4.0 * 0.15 } else { 1.0 };
        assert!((total - expected).abs() < 1e-15);
        assert!(out
            .distances
            .iter()
            .all(|&x| (0.0..=s.equilibrium().b()).contains(&x)));
    }
}

#[test]
fn miss_frequency_per_player_matches_p() {
    let s = strategy(3, 0.2);
    let rounds = 200_000u64;
    let mut misses = 0u64;
    for r in 0..rounds {
        let out = play_round(&s, &mut rng::substream(8, r));
        misses += out.hits.iter().filter(|&&h| !h).count() as u64;
    }
    let draws = (3 * rounds) as f64;
    let freq = misses as f64 / draws;
    let p = s.equilibrium().p();
    // player shots within a round are independent
    let se = (p * (1.0 - p) / draws).sqrt();
    assert!((freq - p).abs() <= 3.0 * se, "{freq} vs {p}");
}

#[test]
fn prize_competition_value() {
    let s = strategy(3, 0.0);
    let stats = simulate(&s, 1_000_000, 2).unwrap();
    let v = 0.283_118_582_857_948_56;
    let (mean, se) = stats.focal();
    assert!((mean - v).abs() <= 3.0 * se, "{mean} vs {v}");
    let pn = s.equilibrium().p().powi(3);
    let se = (pn * (1.0 - pn) / 1e6).sqrt();
    assert!((stats.all_miss_freq - pn).abs() <= 3.0 * se);
}

#[test]
fn deviation_examples() {
    let s = strategy(2, 0.5);
    let rounds = 1_000_000;

    let at_zero = simulate_deviation(&s, 0.0, rounds, 5).unwrap();
    let (mean, se) = at_zero.focal();
    assert!((mean - 0.5).abs() <= 3.0 * se);
    assert_eq!(at_zero.deviation_distance, Some(0.0));

    let beyond = simulate_deviation(&s, 0.9, rounds, 5).unwrap();
    let (mean, se) = beyond.focal();
    assert!(0.5 - mean > 3.0 * se);
    let analytic = deviation_payoff(s.equilibrium(), 0.9).unwrap();
    assert!((mean - analytic).abs() <= 3.0 * se);

    let b = s.equilibrium().b();
    let at_b = simulate_deviation(&s, b, rounds, 5).unwrap();
    let (mean, se) = at_b.focal();
    assert!((mean - 0.5).abs() <= 3.0 * se);
}

#[test]
fn analytic_and_simulated_deviation_agree_off_grid() {
    let s = strategy(4, 0.3);
    let b = s.equilibrium().b();
    for (k, y) in [0.0, b / 2.0, b, (1.0 + b) / 2.0].into_iter().enumerate() {
        let stats = simulate_deviation(&s, y, 200_000, 100 + k as u64).unwrap();
        let (mean, se) = stats.focal();
        let analytic = deviation_payoff(s.equilibrium(), y).unwrap();
        assert!(
            (mean - analytic).abs() <= 3.0 * se,
            "y={y}: {mean} vs {analytic}"
        );
    }
}

#[test]
fn reproducible_across_workers_and_runs() {
    let s = strategy(5, 0.1);
    let a = Simulation::new(s, 50_001, 1234)
        .workers(Some(1))
        .run()
        .unwrap();
    let b = Simulation::new(s, 50_001, 1234)
        .workers(Some(3))
        .run()
        .unwrap();
    let c = Simulation::new(s, 50_001, 1234).run().unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let other_seed = Simulation::new(s, 50_001, 1235).run().unwrap();
    assert_ne!(a.mean_payoff, other_seed.mean_payoff);
}
