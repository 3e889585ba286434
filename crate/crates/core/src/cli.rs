//! Command-line front end.
//!
//! Every command is a pure function of its flags: [`run`] returns the full
//! output text and an exit code, and [`main_with_args`] handles parsing,
//! `--out` and error reporting for the binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric failure.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{Equilibrium, GameParams};
use crate::error::DuelError;
use crate::strategy::FiringStrategy;
use crate::tournament::{SimStats, Simulation};
use crate::verifier::{self, CheckReport, DeviationReport, Tolerances};

/// Sample points per curve in `figure` output.
pub const FIGURE_POINTS: usize = 400;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<DuelError> for CliError {
    fn from(e: DuelError) -> Self {
        match e {
            DuelError::Domain(msg) => CliError::Usage(msg),
            DuelError::Numeric(_) => CliError::Numeric(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "silent-duel",
    version,
    about = "Solve, sample, simulate and verify the n-player silent duel"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format (solve, density and figure accept csv)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for p, v and b
    Solve(GameArgs),
    /// Tabulate F, f, g and G on [0, b]
    Density(DensityArgs),
    /// Firing densities for a family of player counts
    Figure(FigureArgs),
    /// Monte Carlo tournament under the equilibrium
    Simulate(SimulateArgs),
    /// Monte Carlo tournament with player 0 firing at a fixed distance
    Deviate(DeviateArgs),
    /// Certify the equilibrium numerically
    Verify(VerifyArgs),
}

/// Consolation prize flag: a number, or `constant-sum` (1/n) or `prize` (0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Consolation {
    Value(f64),
    ConstantSum,
    Prize,
}

impl FromStr for Consolation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constant-sum" => Ok(Consolation::ConstantSum),
            "prize" => Ok(Consolation::Prize),
            _ => s
                .parse::<f64>()
                .map(Consolation::Value)
                .map_err(|_| format!("expected a number, `constant-sum` or `prize`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    /// Number of players
    #[arg(long)]
    pub n: usize,
    /// Consolation prize in [0, 1), or `constant-sum` / `prize`
    #[arg(long, allow_hyphen_values = true)]
    pub c: Consolation,
}

impl GameArgs {
    pub fn params(&self) -> Result<GameParams, CliError> {
        let c = match self.c {
            Consolation::Value(c) => c,
            Consolation::ConstantSum if self.n >= 1 => 1.0 / self.n as f64,
            Consolation::ConstantSum | Consolation::Prize => 0.0,
        };
        Ok(GameParams::new(self.n, c)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Number of uniform points on [0, b]
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureCase {
    /// c = 1/n
    ConstantSum,
    /// c = 0
    Prize,
}

impl fmt::Display for FigureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureCase::ConstantSum => "constant-sum",
            FigureCase::Prize => "prize",
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub case: FigureCase,
    /// Comma-separated player counts
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 100_000)]
    pub rounds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores); does not affect results
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub mc: MonteCarloArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DeviateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Player 0's firing distance, in [0, 1)
    #[arg(long)]
    pub y: f64,
    #[command(flatten)]
    pub mc: MonteCarloArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Points in the deviation grid
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Overrides the tolerance of the identity checks and the deviation scan
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Text produced by a command and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

#[derive(Serialize)]
struct SolveDoc {
    n: usize,
    c: f64,
    p: f64,
    v: f64,
    b: f64,
    residual: f64,
}

impl From<&Equilibrium> for SolveDoc {
    fn from(eq: &Equilibrium) -> Self {
        SolveDoc {
            n: eq.n(),
            c: eq.c(),
            p: eq.p(),
            v: eq.v(),
            b: eq.b(),
            residual: eq.residual(),
        }
    }
}

#[derive(Serialize)]
struct DensityRow {
    y: f64,
    #[serde(rename = "F")]
    score_cdf: f64,
    f: f64,
    g: f64,
    #[serde(rename = "G")]
    firing_cdf: f64,
}

#[derive(Serialize)]
struct DensityDoc {
    #[serde(flatten)]
    solution: SolveDoc,
    rows: Vec<DensityRow>,
}

#[derive(Serialize)]
struct FigureRow {
    case: String,
    n: usize,
    x: f64,
    g: f64,
}

#[derive(Serialize)]
struct FigureDoc {
    rows: Vec<FigureRow>,
}

#[derive(Serialize)]
struct SimulateDoc {
    equilibrium: SolveDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic_payoff: Option<f64>,
    stats: SimStats,
}

#[derive(Serialize)]
struct VerifyDoc {
    equilibrium: SolveDoc,
    deviation_tolerance: f64,
    pass: bool,
    checks: CheckReport,
    deviation: DeviationReport,
}

fn json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut text =
        serde_json::to_string_pretty(doc).map_err(|e| CliError::Numeric(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Numeric(e.to_string());
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer.write_record(&row).map_err(io)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numeric(e.to_string()))
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x}")
}

/// `points` uniform values on `[0, b]`, hitting `b` exactly.
fn support_grid(b: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                b
            } else {
                b * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn require_json(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(usage(format!("{command} only supports --format json"))),
        _ => Ok(()),
    }
}

fn cmd_solve(args: &GameArgs, format: Format) -> Result<Output, CliError> {
    let eq = Equilibrium::solve(args.params()?)?;
    let doc = SolveDoc::from(&eq);
    let text = match format {
        Format::Json => json(&doc)?,
        Format::Csv => csv_text(
            &["n", "c", "p", "v", "b", "residual"],
            [vec![
                doc.n.to_string(),
                num(doc.c),
                num(doc.p),
                num(doc.v),
                num(doc.b),
                num(doc.residual),
            ]],
        )?,
    };
    Ok(Output::ok(text))
}

fn cmd_density(args: &DensityArgs, format: Format) -> Result<Output, CliError> {
    let params = args.game.params()?;
    if args.points < 2 {
        return Err(usage("points must be at least 2"));
    }
    let eq = Equilibrium::solve(params)?;
    let strategy = FiringStrategy::new(eq);
    let rows = support_grid(eq.b(), args.points)
        .into_iter()
        .map(|y| {
            Ok(DensityRow {
                y,
                score_cdf: eq.score_cdf(y)?,
                f: eq.score_pdf(y),
                g: eq.firing_pdf(y),
                firing_cdf: strategy.firing_cdf(y)?,
            })
        })
        .collect::<Result<Vec<_>, DuelError>>()?;
    let text = match format {
        Format::Json => json(&DensityDoc {
            solution: SolveDoc::from(&eq),
            rows,
        })?,
        Format::Csv => csv_text(
            &["y", "F", "f", "g", "G"],
            rows.iter().map(|r| {
                vec![
                    num(r.y),
                    num(r.score_cdf),
                    num(r.f),
                    num(r.g),
                    num(r.firing_cdf),
                ]
            }),
        )?,
    };
    Ok(Output::ok(text))
}

fn cmd_figure(args: &FigureArgs, format: Format) -> Result<Output, CliError> {
    if args.n_list.is_empty() {
        return Err(usage("n-list must name at least one player count"));
    }
    if args.n_list.iter().any(|&n| n < 2) {
        return Err(usage("n must be at least 2"));
    }
    let mut rows = Vec::new();
    for &n in &args.n_list {
        let params = match args.case {
            FigureCase::ConstantSum => GameParams::constant_sum(n)?,
            FigureCase::Prize => GameParams::prize(n)?,
        };
        let eq = Equilibrium::solve(params)?;
        rows.extend(
            support_grid(eq.b(), FIGURE_POINTS)
                .into_iter()
                .map(|x| FigureRow {
                    case: args.case.to_string(),
                    n,
                    x,
                    g: eq.firing_pdf(x),
                }),
        );
    }
    let text = match format {
        Format::Json => json(&FigureDoc { rows })?,
        Format::Csv => csv_text(
            &["case", "n", "x", "g"],
            rows.iter()
                .map(|r| vec![r.case.clone(), r.n.to_string(), num(r.x), num(r.g)]),
        )?,
    };
    Ok(Output::ok(text))
}

fn monte_carlo(
    game: &GameArgs,
    mc: &MonteCarloArgs,
    deviation: Option<f64>,
) -> Result<Output, CliError> {
    let params = game.params()?;
    if mc.rounds == 0 {
        return Err(usage("rounds must be at least 1"));
    }
    if mc.threads == Some(0) {
        return Err(usage("threads must be at least 1"));
    }
    if let Some(y) = deviation {
        if !(0.0..1.0).contains(&y) {
            return Err(usage(format!("y must lie in [0, 1), got {y}")));
        }
    }
    let eq = Equilibrium::solve(params)?;
    let mut sim = Simulation::new(eq.into(), mc.rounds, mc.seed).workers(mc.threads);
    let mut analytic_payoff = None;
    if let Some(y) = deviation {
        sim = sim.deviation(y);
        analytic_payoff = Some(verifier::deviation_payoff(&eq, y)?);
    }
    let stats = sim.run()?;
    Ok(Output::ok(json(&SimulateDoc {
        equilibrium: SolveDoc::from(&eq),
        analytic_payoff,
        stats,
    })?))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Output, CliError> {
    let params = args.game.params()?;
    if args.grid < 2 {
        return Err(usage("grid must be at least 2"));
    }
    let mut tolerances = Tolerances::default();
    let mut deviation_tolerance = tolerances.identity;
    if let Some(tol) = args.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(usage(format!("tol must be positive, got {tol}")));
        }
        tolerances.identity = tol;
        deviation_tolerance = tol;
    }
    let eq = Equilibrium::solve(params)?;
    let checks = verifier::run_checks(&eq, &tolerances);
    let deviation = verifier::best_response_report(&eq, args.grid)?;
    let pass = checks.pass && deviation.certified(deviation_tolerance);
    let text = json(&VerifyDoc {
        equilibrium: SolveDoc::from(&eq),
        deviation_tolerance,
        pass,
        checks,
        deviation,
    })?;
    Ok(Output {
        text,
        code: if pass { 0 } else { 1 },
    })
}

/// Executes a parsed command.
pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    match &config.command {
        Command::Solve(args) => cmd_solve(args, config.format.unwrap_or(Format::Json)),
        Command::Density(args) => cmd_density(args, config.format.unwrap_or(Format::Csv)),
        Command::Figure(args) => cmd_figure(args, config.format.unwrap_or(Format::Csv)),
        Command::Simulate(args) => {
            require_json(config.format, "simulate")?;
            monte_carlo(&args.game, &args.mc, None)
        }
        Command::Deviate(args) => {
            require_json(config.format, "deviate")?;
            monte_carlo(&args.game, &args.mc, Some(args.y))
        }
        Command::Verify(args) => {
            require_json(config.format, "verify")?;
            cmd_verify(args)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Returns the text that should go to standard output, or the message for
/// standard error, with the exit code.
pub fn execute<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) if !e.use_stderr() => return Ok(Output::ok(e.to_string())),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let output = run(&config)?;
    match &config.out {
        Some(path) => {
            std::fs::write(path, &output.text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output {
                text: String::new(),
                code: output.code,
            })
        }
        None => Ok(output),
    }
}

/// Entry point for the binary: prints output or errors and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(args) {
        Ok(output) => {
            print!("{}", output.text);
            output.code
        }
        Err(e) => {
            let msg = e.to_string();
            eprint!("{msg}");
            if !msg.ends_with('\n') {
                eprintln!();
            }
            e.exit_code()
        }
    }
}
