//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{DuelError, Result};

/// Root of an increasing function on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
///
/// `f` returns the pair `(value, derivative)`. Iteration begins at `start`
/// (clamped into the bracket). A Newton step is taken from the current
/// iterate whenever it lands strictly inside the bracket,
/// otherwise the bracket is bisected. Iteration stops once the step or the
/// bracket width falls below `xtol * (1 + |x|)`.
pub(crate) fn newton_bisect<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    debug_assert!(lo <= hi);
    let mut x = start.clamp(lo, hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return Err(DuelError::numeric(format!(
                "non-finite function value at {x}"
            )));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };

        let scale = xtol * (1.0 + next.abs());
        if (next - x).abs() <= scale || hi - lo <= scale {
            return Ok(next);
        }
        x = next;
    }
    Err(DuelError::numeric(format!(
        "root not converged after {max_iter} iterations (bracket [{lo}, {hi}])"
    )))
}
