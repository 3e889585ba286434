//! Numerical certification of a solved equilibrium.
//!
//! Two kinds of evidence are produced. [`best_response_report`] scans pure
//! deviations `y` and compares the deviator's payoff
//! `Π(y) = (1 - y) F(y)^(n-1) + c y p^(n-1)` with `v`: equality on `[0, b]`
//! and `Π < v` beyond it. [`run_checks`] evaluates the remaining identities
//! (root residual, payout conservation, normalization, derivative
//! consistency, closed-form special cases) and reports each residual against
//! its tolerance instead of failing fast.

use serde::Serialize;

use crate::equilibrium::Equilibrium;
use crate::error::{DuelError, Result};
use crate::strategy::FiringStrategy;

/// Distance kept from `y = 1` when scanning deviations.
pub const GRID_EPSILON: f64 = 1e-9;

const QUAD_DEPTH: u32 = 60;

/// Adaptive Simpson estimate of `∫_a^b f` with absolute error target `tol`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(DuelError::domain(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(DuelError::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, QUAD_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(DuelError::numeric(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(DuelError::numeric(format!(
            "quadrature subdivision limit reached on [{a}, {b}]"
        )));
    }
    Ok(adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Payoff of a player who fires at `y` while everyone else plays the
/// equilibrium.
pub fn deviation_payoff(eq: &Equilibrium, y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(DuelError::domain(format!(
            "deviation distance must lie in [0, 1), got {y}"
        )));
    }
    let others = eq.n() as i32 - 1;
    let cdf = eq.score_cdf(y)?;
    Ok((1.0 - y) * cdf.powi(others) + eq.c() * y * eq.p().powi(others))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub grid: Vec<f64>,
    pub payoff: Vec<f64>,
    pub v: f64,
    pub b: f64,
    /// Largest `|Π(y) - v|` over grid points in `[0, b]`.
    pub max_gap_on_support: f64,
    /// Largest `Π(y) - v` over the whole grid.
    pub max_excess: f64,
}

impl DeviationReport {
    pub fn certified(&self, tol: f64) -> bool {
        self.max_excess <= tol && self.max_gap_on_support <= tol
    }
}

/// Deviation payoffs on `grid_size` uniform points of `[0, 1 - 1e-9]`.
pub fn best_response_report(eq: &Equilibrium, grid_size: usize) -> Result<DeviationReport> {
    if grid_size < 2 {
        return Err(DuelError::domain("deviation grid needs at least 2 points"));
    }
    let top = 1.0 - GRID_EPSILON;
    let step = top / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size)
        .map(|i| {
            if i + 1 == grid_size {
                top
            } else {
                i as f64 * step
            }
        })
        .collect();
    let payoff = grid
        .iter()
        .map(|&y| deviation_payoff(eq, y))
        .collect::<Result<Vec<_>>>()?;

    let v = eq.v();
    let mut max_gap_on_support = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for (&y, &pay) in grid.iter().zip(&payoff) {
        if y <= eq.b() {
            max_gap_on_support = max_gap_on_support.max((pay - v).abs());
        }
        max_excess = max_excess.max(pay - v);
    }
    Ok(DeviationReport {
        grid,
        payoff,
        v,
        b: eq.b(),
        max_gap_on_support,
        max_excess,
    })
}

/// Per-check tolerances for [`run_checks`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Algebraic identities: root residual, accounting, `v`, `b`, `F(b)`, `G(b)`.
    pub identity: f64,
    /// `F(0) = p`.
    pub atom: f64,
    /// Pointwise agreement of `F` with the special-case closed forms.
    pub collapse: f64,
    /// Relative agreement of densities with the special-case closed forms.
    pub density_rel: f64,
    /// Relative error of `f` against centered differences of `F`.
    pub derivative_rel: f64,
    /// Quadrature comparisons: normalization and closed-form `G`.
    pub quadrature: f64,
    /// `|G(G^{-1}(q)) - q|`.
    pub round_trip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-10,
            atom: 1e-12,
            collapse: 1e-12,
            density_rel: 1e-10,
            derivative_rel: 1e-5,
            quadrature: 1e-8,
            round_trip: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CheckReport {
    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, id: &str, residual: Result<f64>, tolerance: f64) {
        let residual = residual.unwrap_or(f64::INFINITY);
        self.0.push(Check {
            id: id.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }
}

fn uniform(a: f64, b: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (b - a) / (points - 1) as f64;
    (0..points).map(move |i| {
        if i + 1 == points {
            b
        } else {
            a + i as f64 * step
        }
    })
}

fn max_over<I, F>(points: I, mut residual: F) -> Result<f64>
where
    I: IntoIterator<Item = f64>,
    F: FnMut(f64) -> Result<f64>,
{
    points
        .into_iter()
        .try_fold(0.0f64, |acc, x| Ok(acc.max(residual(x)?)))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Runs every equilibrium and strategy identity, plus the closed forms that
/// apply when `c = 1/n` or `c = 0`.
pub fn run_checks(eq: &Equilibrium, tol: &Tolerances) -> CheckReport {
    let mut out = Checks::default();
    let strategy = FiringStrategy::new(*eq);
    let (n, c, p, v, b) = (eq.n(), eq.c(), eq.p(), eq.v(), eq.b());
    let nf = n as f64;
    let root = 1.0 / (nf - 1.0);

    let scale = (1.0 / p).powi(n as i32).max(1.0);
    out.record(
        "root_residual",
        Ok(eq.residual().abs() / scale),
        tol.identity,
    );
    out.record(
        "accounting",
        Ok(eq.accounting_residual().abs()),
        tol.identity,
    );
    out.record(
        "value_power",
        Ok((v - p.powi(n as i32 - 1)).abs()),
        tol.identity,
    );
    out.record(
        "support_endpoint",
        Ok((b - (1.0 - v) / (1.0 - c * v)).abs()),
        tol.identity,
    );
    out.record(
        "miss_probability_range",
        Ok(if p > 0.0 && p < 1.0 && b > 0.0 && b < 1.0 {
            0.0
        } else {
            1.0
        }),
        0.0,
    );
    out.record(
        "atom_at_zero",
        eq.score_cdf(0.0).map(|f0| (f0 - p).abs()),
        tol.atom,
    );
    out.record(
        "cdf_at_endpoint",
        eq.score_cdf(b).map(|fb| (fb - 1.0).abs()),
        tol.identity,
    );

    let monotone = uniform(-1.0, 1.0, 2001)
        .map(|y| eq.score_cdf(y))
        .collect::<Result<Vec<_>>>()
        .map(|fs| {
            fs.windows(2)
                .map(|w| (w[0] - w[1]).max(0.0))
                .fold(0.0, f64::max)
        });
    out.record("cdf_nondecreasing", monotone, 0.0);
    let strict = uniform(0.0, b, 1000)
        .map(|y| eq.score_cdf(y))
        .collect::<Result<Vec<_>>>()
        .map(|fs| fs.windows(2).filter(|w| w[1] <= w[0]).count() as f64);
    out.record("cdf_strictly_increasing_on_support", strict, 0.0);

    let h = 1e-6;
    let derivative = max_over(uniform(0.01 * b, 0.99 * b, 99), |y| {
        let fd = (eq.score_cdf(y + h)? - eq.score_cdf(y - h)?) / (2.0 * h);
        Ok(rel(fd, eq.score_pdf(y)))
    });
    out.record("pdf_matches_cdf_derivative", derivative, tol.derivative_rel);

    let normalization =
        quadrature(|x| eq.firing_pdf(x), 0.0, b, 1e-13).map(|mass| (mass - 1.0).abs());
    out.record("firing_density_normalized", normalization, tol.quadrature);

    let closed_form = max_over(uniform(0.0, b, 100), |x| {
        let numeric = quadrature(|t| eq.firing_pdf(t), 0.0, x, 1e-13)?;
        Ok((strategy.firing_cdf(x)? - numeric).abs())
    });
    out.record("firing_cdf_matches_quadrature", closed_form, tol.quadrature);
    out.record(
        "firing_cdf_at_endpoint",
        strategy.firing_cdf(b).map(|g| (g - 1.0).abs()),
        tol.identity,
    );
    // exercise the closed form rather than the x >= b shortcut
    let below_b = b * (1.0 - 1e-15);
    out.record(
        "firing_cdf_closed_form_at_endpoint",
        strategy.firing_cdf(below_b).map(|g| (g - 1.0).abs()),
        tol.identity,
    );

    let round_trip = max_over((1..=100).map(|i| i as f64 / 101.0), |q| {
        let x = strategy.firing_quantile(q)?;
        Ok((strategy.firing_cdf(x)? - q).abs())
    });
    out.record("quantile_round_trip", round_trip, tol.round_trip);

    if eq.params().is_constant_sum() {
        out.record("constant_sum_value", Ok((v - 1.0 / nf).abs()), tol.identity);
        out.record(
            "constant_sum_endpoint",
            Ok((b - nf / (nf + 1.0)).abs()),
            tol.identity,
        );
        let cdf = max_over(uniform(0.0, b, 200), |y| {
            let closed = ((nf - y) / (nf * nf * (1.0 - y))).powf(root);
            Ok((eq.score_cdf(y)? - closed).abs())
        });
        out.record("constant_sum_cdf", cdf, tol.collapse);
        let density = max_over(uniform(0.0, b, 200), |x| {
            let denom = nf * nf * (1.0 - x).powi(2 * n as i32 - 1) * (nf - x).powi(n as i32 - 2);
            Ok(rel(eq.firing_pdf(x), denom.powf(-root)))
        });
        out.record("constant_sum_density", density, tol.density_rel);
        if n == 2 {
            let classic = max_over(uniform(0.0, b, 200), |x| {
                Ok(rel(eq.firing_pdf(x), 1.0 / (4.0 * (1.0 - x).powi(3))))
            });
            out.record("classic_duel_density", classic, tol.density_rel);
        }
    }

    if eq.params().is_prize_competition() {
        out.record("prize_endpoint", Ok((b - (1.0 - v)).abs()), tol.identity);
        let cdf = max_over(uniform(0.0, b, 200), |y| {
            Ok((eq.score_cdf(y)? - p / (1.0 - y).powf(root)).abs())
        });
        out.record("prize_cdf", cdf, tol.collapse);
        let score_density = max_over(uniform(0.0, b, 200), |y| {
            let closed = p / (nf - 1.0) * (1.0 / (1.0 - y)).powf(nf / (nf - 1.0));
            Ok(rel(eq.score_pdf(y), closed))
        });
        out.record("prize_score_density", score_density, tol.density_rel);
        let firing_density = max_over(uniform(0.0, b, 200), |x| {
            let closed = p / (nf - 1.0) * (1.0 / (1.0 - x)).powf((2.0 * nf - 1.0) / (nf - 1.0));
            Ok(rel(eq.firing_pdf(x), closed))
        });
        out.record("prize_firing_density", firing_density, tol.density_rel);
    }

    let checks = out.0;
    let pass = checks.iter().all(|c| c.pass);
    CheckReport { checks, pass }
}
