//! The equilibrium firing strategy as a distribution over distances.
//!
//! Substituting `u = (1 - c x) / (1 - x)` turns the firing density into a
//! polynomial in `u^(1/(n-1))`, which integrates to
//!
//! ```text
//! G(x) = p / (1 - c) * [ (u^(n/(n-1)) - 1) / n - c (u^(1/(n-1)) - 1) ]
//! ```
//!
//! Both bracketed terms are evaluated through `exp_m1`/`ln_1p` of
//! `u - 1 = (1 - c) x / (1 - x)` so that `G` keeps relative precision near 0.

use rand::Rng;
use serde::Serialize;

use crate::equilibrium::{Equilibrium, MAX_ITER};
use crate::error::{DuelError, Result};
use crate::roots::newton_bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiringStrategy {
    eq: Equilibrium,
}

impl From<Equilibrium> for FiringStrategy {
    fn from(eq: Equilibrium) -> Self {
        FiringStrategy { eq }
    }
}

impl FiringStrategy {
    pub fn new(eq: Equilibrium) -> Self {
        FiringStrategy { eq }
    }

    pub fn equilibrium(&self) -> &Equilibrium {
        &self.eq
    }

    /// Firing-distance CDF `G(x)` for `x` in `[0, 1]`; equal to 1 from `b` on.
    pub fn firing_cdf(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(DuelError::domain(format!(
                "firing distance must lie in [0, 1], got {x}"
            )));
        }
        if x >= self.eq.b() {
            return Ok(1.0);
        }
        let c = self.eq.c();
        let n = self.eq.n() as f64;
        let log_u = ((1.0 - c) * x / (1.0 - x)).ln_1p();
        let outer = (n / (n - 1.0) * log_u).exp_m1() / n;
        let inner = (log_u / (n - 1.0)).exp_m1();
        Ok((self.eq.p() / (1.0 - c) * (outer - c * inner)).clamp(0.0, 1.0))
    }

    /// Firing-distance density, zero outside `[0, b]`.
    pub fn firing_pdf(&self, x: f64) -> f64 {
        self.eq.firing_pdf(x)
    }

    /// The distance `x` in `[0, b]` with `G(x) = q`.
    ///
    /// Solved in `s = u^(1/(n-1)) - 1`, where `G` is the polynomial
    /// `p / (1 - c) * [ ((1 + s)^n - 1) / n - c s ]` on `[0, 1/p - 1]`.
    pub fn firing_quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(DuelError::domain(format!(
                "quantile level must lie in [0, 1], got {q}"
            )));
        }
        if q == 0.0 {
            return Ok(0.0);
        }
        if q == 1.0 {
            return Ok(self.eq.b());
        }
        let c = self.eq.c();
        let n = self.eq.n() as f64;
        let target = q * (1.0 - c) / self.eq.p();
        let poly = |s: f64| {
            let log1p = s.ln_1p();
            let value = (n * log1p).exp_m1() / n - c * s - target;
            let slope = ((n - 1.0) * log1p).exp_m1() + (1.0 - c);
            (value, slope)
        };
        let s_max = 1.0 / self.eq.p() - 1.0;
        // the tangent at s = 0 undershoots the convex polynomial, so its root
        // starts Newton to the right of the solution
        let start = (target / (1.0 - c)).min(s_max);
        let s = newton_bisect(poly, 0.0, s_max, start, 4.0 * f64::EPSILON, MAX_ITER)?;
        let u_minus_one = ((n - 1.0) * s.ln_1p()).exp_m1();
        let x = u_minus_one / (u_minus_one + 1.0 - c);
        Ok(x.clamp(0.0, self.eq.b()))
    }

    /// One inverse-transform draw from the equilibrium firing distribution.
    pub fn sample_firing_distance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.firing_quantile(u)
            .expect("quantile of a uniform draw in [0, 1) is always defined")
    }
}
