//! Closed-form symmetric equilibrium.
//!
//! With `z = 1/p`, the overall miss probability solves
//! `z^n = 1 - n c + n z` on `z > 1`. Everything else follows in closed form:
//! `v = p^(n-1)`, `b = (1 - v) / (1 - c v)` and the score CDF
//! `F(y) = p ((1 - c y) / (1 - y))^(1/(n-1))` on `[0, b]`.

use serde::Serialize;

use crate::error::{DuelError, Result};
use crate::roots::newton_bisect;

/// Default relative residual tolerance for the miss-probability root.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap shared by the bracketed Newton solves.
pub const MAX_ITER: usize = 200;

const XTOL: f64 = 4.0 * f64::EPSILON;

/// A duel instance: `n` players and consolation prize `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameParams {
    n: usize,
    c: f64,
}

impl GameParams {
    /// Validates `n >= 2` and `0 <= c < 1`.
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(DuelError::domain("n must be at least 2"));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(DuelError::domain(format!("c must lie in [0, 1), got {c}")));
        }
        Ok(GameParams { n, c })
    }

    /// The constant-sum game, `c = 1/n`.
    pub fn constant_sum(n: usize) -> Result<Self> {
        Self::new(n, 1.0 / n as f64)
    }

    /// The prize competition, `c = 0`.
    pub fn prize(n: usize) -> Result<Self> {
        Self::new(n, 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `n` as a float, for arithmetic.
    pub(crate) fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Whether `c` is the constant-sum prize `1/n` up to rounding.
    pub fn is_constant_sum(&self) -> bool {
        (self.c * self.nf() - 1.0).abs() <= 4.0 * f64::EPSILON
    }

    pub fn is_prize_competition(&self) -> bool {
        self.c == 0.0
    }
}

/// Residual `z^n - n z - (1 - n c)` of the miss-probability polynomial.
pub fn polynomial_residual(params: GameParams, z: f64) -> f64 {
    let n = params.nf();
    z.powi(params.n as i32) - n * z - (1.0 - n * params.c)
}

/// Solves for the overall miss probability `p`.
///
/// The root is located in the shifted variable `s = z - 1`, where the
/// polynomial reads `(1 + s)^n - 1 - n s - n (1 - c)`; this keeps full
/// relative precision when `c` is close to 1 and the root approaches
/// `z = 1`. The upper end of the bracket starts at `z = 2` and doubles until
/// the polynomial turns positive. Values of `c` above `1 - 1e-6` are
/// accepted but may exhaust the iteration cap.
pub fn solve_miss_probability(params: GameParams, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(DuelError::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = params.nf();
    let gap = n * (1.0 - params.c);
    let shifted = |s: f64| {
        let log1p = s.ln_1p();
        let value = (n * log1p).exp_m1() - n * s - gap;
        let slope = n * ((n - 1.0) * log1p).exp_m1();
        (value, slope)
    };

    // convex in s, so Newton from the right end of the bracket stays inside it
    let mut hi = 1.0;
    let mut doublings = 0;
    while shifted(hi).0 <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 1000 || !hi.is_finite() {
            return Err(DuelError::numeric(
                "could not bracket the miss-probability root",
            ));
        }
    }

    let s = newton_bisect(shifted, 0.0, hi, hi, XTOL, MAX_ITER)?;
    let z = 1.0 + s;
    let residual = polynomial_residual(params, z);
    let scale = z.powi(params.n as i32).max(1.0);
    if s.is_nan() || s <= 0.0 || residual.abs() > tol * scale {
        return Err(DuelError::numeric(format!(
            "miss-probability root residual {residual:e} exceeds {tol:e} (n = {}, c = {})",
            params.n, params.c
        )));
    }
    Ok(1.0 / z)
}

/// Solved equilibrium constants for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    params: GameParams,
    p: f64,
    v: f64,
    b: f64,
}

/// Solves the instance with an explicit residual tolerance.
pub fn solve_equilibrium(params: GameParams, tol: f64) -> Result<Equilibrium> {
    let p = solve_miss_probability(params, tol)?;
    let v = p.powi(params.n as i32 - 1);
    let b = (1.0 - v) / (1.0 - params.c * v);
    Ok(Equilibrium { params, p, v, b })
}

impl Equilibrium {
    /// Solves the instance at [`DEFAULT_TOL`].
    pub fn solve(params: GameParams) -> Result<Self> {
        solve_equilibrium(params, DEFAULT_TOL)
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    /// Overall probability that a player misses.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Equilibrium payoff of every player.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// Upper end of the firing-distance support.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Residual of `z = 1/p` in the defining polynomial.
    pub fn residual(&self) -> f64 {
        polynomial_residual(self.params, 1.0 / self.p)
    }

    /// `n v - (1 - p^n) - n c p^n`: expected total payout minus what the
    /// players collectively expect to receive.
    pub fn accounting_residual(&self) -> f64 {
        let n = self.params.nf();
        let pn = self.p.powi(self.params.n as i32);
        n * self.v - (1.0 - pn) - n * self.params.c * pn
    }

    /// Exponent `1/(n-1)` of the score CDF.
    fn root_exponent(&self) -> f64 {
        1.0 / (self.params.nf() - 1.0)
    }

    /// Score CDF `F(y)` on `[-1, 1]`.
    ///
    /// A miss scores `-1`, so `F` equals `p` throughout `[-1, 0)`.
    pub fn score_cdf(&self, y: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(DuelError::domain(format!(
                "score must lie in [-1, 1], got {y}"
            )));
        }
        Ok(if y < 0.0 {
            self.p
        } else if y <= self.b {
            let c = self.params.c;
            let ratio = (1.0 - c * y) / (1.0 - y);
            (self.p * ratio.powf(self.root_exponent())).min(1.0)
        } else {
            1.0
        })
    }

    /// Score density `f(y)` on the continuous part of the support, zero
    /// outside `[0, b]`.
    pub fn score_pdf(&self, y: f64) -> f64 {
        if !(0.0..=self.b).contains(&y) {
            return 0.0;
        }
        let c = self.params.c;
        let ratio = (1.0 - c * y) / (1.0 - y);
        let cdf = self.p * ratio.powf(self.root_exponent());
        cdf * (1.0 - c) / ((self.params.nf() - 1.0) * (1.0 - c * y) * (1.0 - y))
    }

    /// Firing-distance density `g(x) = f(x) / (1 - x)`, zero outside `[0, b]`.
    pub fn firing_pdf(&self, x: f64) -> f64 {
        if !(0.0..=self.b).contains(&x) {
            return 0.0;
        }
        self.score_pdf(x) / (1.0 - x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: usize, c: f64) -> Equilibrium {
        Equilibrium::solve(GameParams::new(n, c).unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(
            GameParams::new(1, 0.0).unwrap_err(),
            DuelError::Domain("n must be at least 2".into())
        );
        assert!(GameParams::new(2, 1.0).is_err());
        assert!(GameParams::new(2, -0.1).is_err());
        assert!(GameParams::new(2, f64::NAN).is_err());
        let ok = GameParams::new(2, 0.5).unwrap();
        assert!(solve_miss_probability(ok, 0.0).is_err());
    }

    #[test]
    fn miss_probability_examples() {
        let cases = [
            (2, 0.5, 0.5),
            (3, 1.0 / 3.0, 3f64.powf(-0.5)),
            (2, 0.0, 2f64.sqrt() - 1.0),
            // bisection oracle on z^3 - 3z - 1 over [1, 4]
            (3, 0.0, 0.532_088_886_237_956_1),
        ];
        for (n, c, expected) in cases {
            let p = solve_miss_probability(GameParams::new(n, c).unwrap(), DEFAULT_TOL).unwrap();
            assert!(
                (p - expected).abs() < 1e-13,
                "n={n} c={c}: {p} vs {expected}"
            );
        }
    }

    #[test]
    fn equilibrium_examples() {
        let eq = solve(2, 0.5);
        assert!((eq.p() - 0.5).abs() < 1e-14);
        assert!((eq.v() - 0.5).abs() < 1e-14);
        assert!((eq.b() - 2.0 / 3.0).abs() < 1e-14);

        let eq = solve(4, 0.25);
        assert!((eq.p() - 4f64.powf(-1.0 / 3.0)).abs() < 1e-14);
        assert!((eq.v() - 0.25).abs() < 1e-14);
        assert!((eq.b() - 0.8).abs() < 1e-14);

        let eq = solve(2, 0.0);
        assert!((eq.v() - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((eq.b() - (2.0 - 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn frozen_instances() {
        // 30-digit bisection oracle
        let cases = [
            (
                10,
                0.9,
                0.888_776_797_274_735_7,
                0.346_046_430_730_174_67,
                0.949_743_329_681_198_7,
            ),
            (
                6,
                0.1,
                0.692_547_097_693_502_6,
                0.159_311_295_001_144_28,
                0.854_298_647_382_072_1,
            ),
            (
                4,
                0.5,
                0.669_631_546_695_257_4,
                0.300_267_076_757_736_7,
                0.823_344_554_516_851_2,
            ),
        ];
        for (n, c, p, v, b) in cases {
            let eq = solve(n, c);
            assert!((eq.p() - p).abs() < 1e-13);
            assert!((eq.v() - v).abs() < 1e-13);
            assert!((eq.b() - b).abs() < 1e-13);
        }
    }

    #[test]
    fn near_one_consolation_still_converges() {
        let eq = solve(3, 1.0 - 1e-6);
        assert!(eq.p() < 1.0);
        assert!(eq.residual().abs() < 1e-12);
    }

    #[test]
    fn score_cdf_examples() {
        let eq = solve(2, 0.5);
        assert!((eq.score_cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((eq.score_cdf(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(eq.score_cdf(-1.0).unwrap(), eq.p());
        assert_eq!(eq.score_cdf(-0.3).unwrap(), eq.p());
        assert!((eq.score_cdf(eq.b()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(eq.score_cdf(0.9).unwrap(), 1.0);
        assert!(eq.score_cdf(1.5).is_err());
        assert!(eq.score_cdf(-1.01).is_err());
    }

    #[test]
    fn score_pdf_examples() {
        let eq = solve(2, 0.0);
        assert!((eq.score_pdf(0.0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);

        let eq = solve(2, 0.5);
        assert!((eq.score_pdf(0.0) - 0.25).abs() < 1e-15);
        let h = 1e-6;
        let fd = (eq.score_cdf(h).unwrap() - eq.score_cdf(0.0).unwrap()) / h;
        assert!((fd - 0.25).abs() < 1e-6);

        // p / (2 v^{3/2}) with the cubic oracle's p
        let eq = solve(3, 0.0);
        assert!((eq.score_pdf(eq.b()) - 1.766_044_443_118_978).abs() < 1e-12);

        assert_eq!(eq.score_pdf(-0.1), 0.0);
        assert_eq!(eq.score_pdf(0.99), 0.0);
    }

    #[test]
    fn firing_pdf_examples() {
        let eq = solve(2, 0.5);
        assert!((eq.firing_pdf(0.0) - 0.25).abs() < 1e-15);
        assert!((eq.firing_pdf(0.5) - 2.0).abs() < 1e-14);
        let eq = solve(2, 0.0);
        assert!((eq.firing_pdf(0.0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(eq.firing_pdf(0.95), 0.0);
    }

    #[test]
    fn identities_hold_on_grid() {
        for n in [2, 3, 4, 6, 10] {
            for c in [0.0, 0.1, 1.0 / n as f64, 0.5, 0.9] {
                let eq = solve(n, c);
                assert!(eq.residual().abs() <= 1e-10);
                assert!(eq.accounting_residual().abs() <= 1e-10);
                assert!((eq.score_cdf(0.0).unwrap() - eq.p()).abs() <= 1e-12);
                assert!((eq.score_cdf(eq.b()).unwrap() - 1.0).abs() <= 1e-10);
                assert!(eq.p() > 0.0 && eq.p() < 1.0);
                assert!(eq.b() > 0.0 && eq.b() < 1.0);
            }
        }
    }
}
