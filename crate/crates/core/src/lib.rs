//! Symmetric equilibrium of the n-player silent duel with a consolation prize.
//!
//! Each of `n` equally skilled marksmen fires a single silent shot at a
//! distance of their choosing. Distance is measured by the probability of
//! missing, so `x` in `[0, 1]`. The player who hits at the greatest distance
//! takes a unit prize (split on ties); if everyone misses, each player
//! receives the consolation prize `c`.
//!
//! The crate is organised around the lifecycle of one game instance:
//!
//! - [`equilibrium`] solves for the miss probability `p`, the value
//!   `v = p^(n-1)` and the support endpoint `b`, and evaluates the score
//!   distribution and the firing-distance density.
//! - [`strategy`] exposes the firing-distance CDF, its quantile and an
//!   inverse-transform sampler.
//! - [`tournament`] allocates payoffs and runs reproducible Monte Carlo
//!   tournaments, optionally with one player deviating to a pure strategy.
//! - [`verifier`] certifies an equilibrium numerically: deviation payoffs,
//!   conservation and normalization identities, special-case closed forms.
//! - [`cli`] is the command-line front end used by the `silent-duel` binary.
//!
//! ```
//! use silent_duel::{GameParams, Equilibrium};
//!
//! let eq = Equilibrium::solve(GameParams::new(2, 0.5)?)?;
//! assert!((eq.p() - 0.5).abs() < 1e-12);
//! assert!((eq.b() - 2.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), silent_duel::DuelError>(())
//! ```

pub mod cli;
pub mod equilibrium;
mod error;
pub mod rng;
mod roots;
pub mod strategy;
pub mod tournament;
pub mod verifier;

pub use equilibrium::{solve_equilibrium, solve_miss_probability, Equilibrium, GameParams};
pub use error::{DuelError, Result};
pub use strategy::FiringStrategy;
pub use tournament::{allocate_payoffs, RoundOutcome, Score, SimStats};
