//! Monte Carlo tournaments under the equilibrium strategy.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DuelError, Result};
use crate::rng;
use crate::strategy::FiringStrategy;

/// Rounds per aggregation chunk. Chunk results are merged in index order, so
/// the statistics do not depend on how chunks are scheduled.
pub const CHUNK_ROUNDS: u64 = 4096;

/// Outcome of a single shot. A miss ranks below every hit; hits rank by
/// distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub enum Score {
    Miss,
    Hit(f64),
}

impl Score {
    pub fn from_shot(distance: f64, hit: bool) -> Self {
        if hit {
            Score::Hit(distance)
        } else {
            Score::Miss
        }
    }

    /// Numeric score: the hit distance, or `-1` for a miss.
    pub fn value(&self) -> f64 {
        match *self {
            Score::Miss => -1.0,
            Score::Hit(y) => y,
        }
    }
}

/// Splits the prize: the best hit wins 1, shared equally on exact ties; if
/// nobody hits, everyone gets the consolation prize `c`.
pub fn allocate_payoffs(scores: &[Score], c: f64) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(DuelError::domain(
            "cannot allocate payoffs among zero players",
        ));
    }
    let best = scores
        .iter()
        .filter_map(|s| match *s {
            Score::Hit(y) => Some(y),
            Score::Miss => None,
        })
        .fold(None, |acc: Option<f64>, y| {
            Some(acc.map_or(y, |a| a.max(y)))
        });

    Ok(match best {
        None => vec![c; scores.len()],
        Some(top) => {
            let winners = scores.iter().filter(|s| **s == Score::Hit(top)).count();
            let share = 1.0 / winners as f64;
            scores
                .iter()
                .map(|s| if *s == Score::Hit(top) { share } else { 0.0 })
                .collect()
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundOutcome {
    pub distances: Vec<f64>,
    pub hits: Vec<bool>,
    pub scores: Vec<Score>,
    pub payoffs: Vec<f64>,
}

impl RoundOutcome {
    pub fn all_missed(&self) -> bool {
        !self.hits.iter().any(|&h| h)
    }
}

/// Plays one round with every player on the equilibrium strategy.
pub fn play_round<R: Rng + ?Sized>(strategy: &FiringStrategy, rng: &mut R) -> RoundOutcome {
    play_round_with(strategy, None, rng)
}

/// Plays one round, optionally forcing player 0 to fire at `deviation`.
///
/// Each player consumes a distance draw and then a hit draw, in index order.
/// A deviating player 0 still consumes (and discards) its distance draw, so
/// the other players see the same numbers as in an undeviated round.
pub fn play_round_with<R: Rng + ?Sized>(
    strategy: &FiringStrategy,
    deviation: Option<f64>,
    rng: &mut R,
) -> RoundOutcome {
    let eq = strategy.equilibrium();
    let n = eq.n();
    let mut distances = Vec::with_capacity(n);
    let mut hits = Vec::with_capacity(n);
    for i in 0..n {
        let drawn = strategy.sample_firing_distance(rng);
        let distance = match deviation {
            Some(y) if i == 0 => y,
            _ => drawn,
        };
        let hit = rng.random::<f64>() < 1.0 - distance;
        distances.push(distance);
        hits.push(hit);
    }
    let scores: Vec<Score> = distances
        .iter()
        .zip(&hits)
        .map(|(&x, &h)| Score::from_shot(x, h))
        .collect();
    let payoffs = allocate_payoffs(&scores, eq.c()).expect("n >= 2 players");
    RoundOutcome {
        distances,
        hits,
        scores,
        payoffs,
    }
}

/// Monte Carlo estimates with the inputs needed to replay them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub n: usize,
    pub c: f64,
    pub rounds: u64,
    pub seed: u64,
    /// Mean payoff of each player.
    pub mean_payoff: Vec<f64>,
    /// Standard error of each entry of `mean_payoff`.
    pub std_error: Vec<f64>,
    pub all_miss_freq: f64,
    pub all_miss_std_error: f64,
    /// Player 0's fixed firing distance, for deviation runs.
    pub deviation_distance: Option<f64>,
    /// Set when `rounds == 1`; standard errors are then reported as 0.
    pub degenerate: bool,
}

impl SimStats {
    /// Player 0's mean payoff and its standard error.
    pub fn focal(&self) -> (f64, f64) {
        (self.mean_payoff[0], self.std_error[0])
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / total as f64;
        self.mean += delta * weight;
        self.m2 += other.m2 + delta * delta * self.count as f64 * weight;
        self.count = total;
    }

    fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.count - 1) as f64;
        (var / self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
struct Tally {
    players: Vec<Moments>,
    all_miss: u64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            players: vec![Moments::default(); n],
            all_miss: 0,
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (mine, theirs) in self.players.iter_mut().zip(&other.players) {
            mine.merge(theirs);
        }
        self.all_miss += other.all_miss;
    }
}

/// A configured Monte Carlo run.
///
/// Round `r` draws from [`rng::substream`]`(seed, r)`, and per-chunk tallies
/// are merged in chunk order, so the result is a pure function of
/// `(strategy, rounds, seed, deviation)` for any worker count.
#[derive(Debug, Clone)]
pub struct Simulation {
    strategy: FiringStrategy,
    rounds: u64,
    seed: u64,
    deviation: Option<f64>,
    workers: Option<usize>,
}

impl Simulation {
    pub fn new(strategy: FiringStrategy, rounds: u64, seed: u64) -> Self {
        Simulation {
            strategy,
            rounds,
            seed,
            deviation: None,
            workers: None,
        }
    }

    /// Player 0 fires at `distance` every round.
    pub fn deviation(mut self, distance: f64) -> Self {
        self.deviation = Some(distance);
        self
    }

    /// Number of worker threads; `None` uses the global rayon pool.
    pub fn workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    fn chunk(&self, index: u64) -> Tally {
        let n = self.strategy.equilibrium().n();
        let start = index * CHUNK_ROUNDS;
        let end = (start + CHUNK_ROUNDS).min(self.rounds);
        let mut tally = Tally::new(n);
        for round in start..end {
            let mut rng = rng::substream(self.seed, round);
            let outcome = play_round_with(&self.strategy, self.deviation, &mut rng);
            for (m, &pay) in tally.players.iter_mut().zip(&outcome.payoffs) {
                m.push(pay);
            }
            if outcome.all_missed() {
                tally.all_miss += 1;
            }
        }
        tally
    }

    pub fn run(&self) -> Result<SimStats> {
        if self.rounds == 0 {
            return Err(DuelError::domain("rounds must be at least 1"));
        }
        if let Some(y) = self.deviation {
            if !(0.0..1.0).contains(&y) {
                return Err(DuelError::domain(format!(
                    "deviation distance must lie in [0, 1), got {y}"
                )));
            }
        }
        let chunks = self.rounds.div_ceil(CHUNK_ROUNDS);
        let collect = || {
            (0..chunks)
                .into_par_iter()
                .map(|k| self.chunk(k))
                .collect::<Vec<_>>()
        };
        let parts = match self.workers {
            Some(0) => return Err(DuelError::domain("worker count must be at least 1")),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| DuelError::numeric(format!("thread pool: {e}")))?
                .install(collect),
            None => collect(),
        };

        let eq = self.strategy.equilibrium();
        let mut total = Tally::new(eq.n());
        for part in &parts {
            total.merge(part);
        }
        let rounds_f = self.rounds as f64;
        let freq = total.all_miss as f64 / rounds_f;
        let degenerate = self.rounds == 1;
        Ok(SimStats {
            n: eq.n(),
            c: eq.c(),
            rounds: self.rounds,
            seed: self.seed,
            mean_payoff: total.players.iter().map(|m| m.mean).collect(),
            std_error: total.players.iter().map(Moments::std_error).collect(),
            all_miss_freq: freq,
            all_miss_std_error: if degenerate {
                0.0
            } else {
                (freq * (1.0 - freq) / rounds_f).sqrt()
            },
            deviation_distance: self.deviation,
            degenerate,
        })
    }
}

/// Every player follows the equilibrium strategy.
pub fn simulate(strategy: &FiringStrategy, rounds: u64, seed: u64) -> Result<SimStats> {
    Simulation::new(*strategy, rounds, seed).run()
}

/// Player 0 fires at `y_dev`; the others follow the equilibrium strategy.
pub fn simulate_deviation(
    strategy: &FiringStrategy,
    y_dev: f64,
    rounds: u64,
    seed: u64,
) -> Result<SimStats> {
    Simulation::new(*strategy, rounds, seed)
        .deviation(y_dev)
        .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{Equilibrium, GameParams};
    use proptest::prelude::*;
    use Score::{Hit, Miss};

    fn strategy(n: usize, c: f64) -> FiringStrategy {
        Equilibrium::solve(GameParams::new(n, c).unwrap())
            .unwrap()
            .into()
    }

    #[test]
    fn score_ordering() {
        assert!(Miss < Hit(0.0));
        assert!(Hit(0.2) < Hit(0.3));
        assert_eq!(Miss.value(), -1.0);
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(
            allocate_payoffs(&[Hit(0.4), Hit(0.7), Miss], 0.2).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
        assert_eq!(
            allocate_payoffs(&[Miss, Miss, Miss], 0.2).unwrap(),
            vec![0.2, 0.2, 0.2]
        );
        assert_eq!(
            allocate_payoffs(&[Hit(0.5), Hit(0.5)], 0.0).unwrap(),
            vec![0.5, 0.5]
        );
        assert_eq!(
            allocate_payoffs(&[Hit(0.0), Miss], 0.9).unwrap(),
            vec![1.0, 0.0]
        );
        assert!(allocate_payoffs(&[], 0.1).is_err());
    }

    #[test]
    fn conservation_over_all_hit_patterns() {
        let distances = [0.1, 0.35, 0.35, 0.6];
        for n in 2..=4 {
            for c in [0.0, 0.25, 1.0 / n as f64, 0.9] {
                for mask in 0u32..(1 << n) {
                    let scores: Vec<Score> = (0..n)
                        .map(|i| Score::from_shot(distances[i], mask & (1 << i) != 0))
                        .collect();
                    let pay = allocate_payoffs(&scores, c).unwrap();
                    let total: f64 = pay.iter().sum();
                    let expected = if mask == 0 { n as f64 * c } else { 1.0 };
                    assert!((total - expected).abs() < 1e-15, "n={n} mask={mask:b}");
                    assert!(pay.iter().all(|&x| x >= 0.0));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn allocation_is_permutation_equivariant(
            raw in prop::collection::vec(prop::option::of(0u8..6), 2..7),
            c in 0.0f64..1.0,
            rotate in 0usize..7,
        ) {
            // coarse distances so ties actually occur
            let scores: Vec<Score> = raw.iter().map(|r| match r {
                Some(k) => Hit(*k as f64 / 8.0),
                None => Miss,
            }).collect();
            let pay = allocate_payoffs(&scores, c).unwrap();
            let k = rotate % scores.len();
            let mut rotated = scores.clone();
            rotated.rotate_left(k);
            let mut expected = pay.clone();
            expected.rotate_left(k);
            prop_assert_eq!(allocate_payoffs(&rotated, c).unwrap(), expected);
        }
    }

    #[test]
    fn rounds_replay() {
        let s = strategy(3, 0.2);
        let a = play_round(&s, &mut rng::substream(5, 11));
        let b = play_round(&s, &mut rng::substream(5, 11));
        assert_eq!(a, b);
        assert_eq!(a.distances.len(), 3);
        for (score, (&x, &h)) in a.scores.iter().zip(a.distances.iter().zip(&a.hits)) {
            assert_eq!(*score, Score::from_shot(x, h));
        }
    }

    #[test]
    fn deviation_shares_stream_with_other_players() {
        let s = strategy(3, 0.0);
        let base = play_round(&s, &mut rng::substream(1, 0));
        let dev = play_round_with(&s, Some(0.3), &mut rng::substream(1, 0));
        assert_eq!(dev.distances[0], 0.3);
        assert_eq!(base.distances[1..], dev.distances[1..]);
        assert_eq!(base.hits[1..], dev.hits[1..]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = strategy(2, 0.5);
        assert!(simulate(&s, 0, 1).is_err());
        assert!(simulate_deviation(&s, 1.0, 10, 1).is_err());
        assert!(simulate_deviation(&s, -0.1, 10, 1).is_err());
        assert!(Simulation::new(s, 10, 1).workers(Some(0)).run().is_err());
    }

    #[test]
    fn single_round_is_flagged() {
        let stats = simulate(&strategy(2, 0.5), 1, 3).unwrap();
        assert!(stats.degenerate);
        assert!(stats.std_error.iter().all(|&se| se == 0.0));
        assert_eq!(stats.all_miss_std_error, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = strategy(3, 0.1);
        let rounds = 3 * CHUNK_ROUNDS + 17;
        let one = Simulation::new(s, rounds, 99)
            .workers(Some(1))
            .run()
            .unwrap();
        let four = Simulation::new(s, rounds, 99)
            .workers(Some(4))
            .run()
            .unwrap();
        assert_eq!(one, four);
        assert_eq!(one, simulate(&s, rounds, 99).unwrap());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut merged = Moments::default();
        for chunk in xs.chunks(64) {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            merged.merge(&m);
        }
        assert!((whole.mean - merged.mean).abs() < 1e-12);
        assert!((whole.m2 - merged.m2).abs() < 1e-9 * whole.m2);
    }
}
