//! The `frameopt` command line: JSON reports on stdout, a short log on stderr.
//!
//! Exit codes: 0 success, 1 `verify-examples` mismatch, 2 malformed input or
//! usage, 3 a mathematical precondition failed (not a dual, degenerate
//! probability, majorization failure, ...).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::dual_pairs::{construct_probability_uniform_parseval, pair_conditions, PairVerdict};
use crate::erasure::{measure, measure_all, one_erasure_closed_form, weights_from_probabilities, MeasureKind, MeasureReport};
use crate::error::FrameError;
use crate::frame::{canonical_dual, duality_residual, is_dual, Frame};
use crate::golden::{self, CheckStatus};
use crate::io::{FrameFile, Problem};
use crate::optimality::{search_optimal_dual, SearchConfig};
use crate::sim::{simulate, SimConfig, SimMode};
use crate::tolerance::{Tolerances, ENV_VAR};

#[derive(Debug, Parser)]
#[command(name = "frameopt", version, about = "Probabilistic erasure measures and optimal duals for finite frames")]
pub struct Cli {
    /// Absolute tolerance for duality and symmetry checks (overrides FRAMEOPT_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    #[value(name = "O")]
    O,
    #[value(name = "r")]
    R,
    #[value(name = "A")]
    A,
    #[value(name = "all")]
    All,
}

impl MeasureArg {
    fn kind(self) -> Option<MeasureKind> {
        match self {
            MeasureArg::O => Some(MeasureKind::Norm),
            MeasureArg::R => Some(MeasureKind::Radius),
            MeasureArg::A => Some(MeasureKind::Averaged),
            MeasureArg::All => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualArg {
    /// Use `S^-1 F` even when the file carries a dual.
    Canonical,
    /// Use the file's `dual` key.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Raw,
    Weighted,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Worst-case erasure measures of a frame and dual.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_enum, default_value = "all")]
        measure: MeasureArg,
        /// Which dual to use; defaults to the file's dual.
        #[arg(long, value_enum)]
        dual: Option<DualArg>,
    },
    /// Search the duals of a frame for the smallest single-erasure measure.
    Search {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 200_000)]
        iters: usize,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, value_enum, default_value = "A")]
        measure: MeasureArg,
    },
    /// Parseval frame whose vector norms match the erasure probabilities.
    Construct {
        #[arg(long, value_delimiter = ',', required = true)]
        probabilities: Vec<f64>,
        #[arg(long)]
        dimension: usize,
    },
    /// Monte Carlo erasure channel.
    Simulate {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        signals: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "weighted")]
        mode: ModeArg,
        #[arg(long, value_enum)]
        dual: Option<DualArg>,
    },
    /// Check the reference instances against their known values.
    VerifyExamples {
        /// Read `<name>.json` fixtures from this directory instead of the embedded ones.
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
    },
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn schema(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<FrameError> for Failure {
    fn from(e: FrameError) -> Self {
        let code = match e {
            FrameError::DimensionMismatch(_) | FrameError::InvalidPattern(_) | FrameError::Empty => 2,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

fn load(path: &Path) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
    let file = FrameFile::parse(&text).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
    file.check_shape().map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
    Ok(file.into_problem()?)
}

fn pick_dual(problem: &Problem, choice: Option<DualArg>, tol: &Tolerances) -> Result<(Frame, &'static str), Failure> {
    let (g, source) = match (choice, &problem.dual) {
        (Some(DualArg::Canonical), _) => (canonical_dual(&problem.frame)?, "canonical"),
        (Some(DualArg::File) | None, Some(g)) => (g.clone(), "file"),
        (Some(DualArg::File), None) => return Err(Failure::schema("input has no `dual` key")),
        (None, None) => return Err(Failure::schema("input has no `dual` key; pass --dual canonical")),
    };
    if !is_dual(&problem.frame, &g, tol.dual)? {
        let (dev, _) = duality_residual(&problem.frame, &g)?;
        return Err(FrameError::NotDual(dev).into());
    }
    Ok((g, source))
}

fn warn_weights(problem: &Problem, err: &mut dyn Write) {
    if problem.model.has_weight_below_one() {
        let _ = writeln!(
            err,
            "warning: some weight numbers are below 1 (N = n with non-uniform probabilities)"
        );
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    writeln!(out, "{text}").map_err(|e| Failure { code: 1, message: e.to_string() })
}

#[derive(Serialize)]
struct AnalyzeReport {
    dual: &'static str,
    weights: Vec<f64>,
    measures: Vec<MeasureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<MeasureReport>,
    pair_verdict: PairVerdict,
}

fn analyze(
    input: &Path,
    m: usize,
    which: MeasureArg,
    dual: Option<DualArg>,
    tol: &Tolerances,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let problem = load(input)?;
    warn_weights(&problem, err);
    let (g, source) = pick_dual(&problem, dual, tol)?;
    let (f, model) = (&problem.frame, &problem.model);
    let measures = match which.kind() {
        Some(kind) => vec![measure(f, &g, model, m, kind)?],
        None => measure_all(f, &g, model, m)?,
    };
    let closed_form = if m == 1 { Some(one_erasure_closed_form(f, &g, model)?) } else { None };
    let pair_verdict = pair_conditions(f, &g, model, tol.certificate)?;
    let _ = writeln!(
        err,
        "analyze: {} vectors in dimension {}, m = {m}, dual = {source}",
        f.len(),
        f.dimension()
    );
    for r in &measures {
        let _ = writeln!(err, "  {} = {}", r.measure.symbol(), r.value);
    }
    emit(
        out,
        &AnalyzeReport {
            dual: source,
            weights: model.q.clone(),
            measures,
            closed_form,
            pair_verdict,
        },
    )?;
    Ok(0)
}

fn search(input: &Path, cfg: SearchConfig, which: MeasureArg, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let problem = load(input)?;
    warn_weights(&problem, err);
    let kind = which
        .kind()
        .ok_or_else(|| Failure::schema("search needs a single measure (O, r or A)"))?;
    let outcome = search_optimal_dual(&problem.frame, &problem.model, &cfg, kind)?;
    let _ = writeln!(
        err,
        "search: {} = {} (canonical {}), best restart {}",
        kind.symbol(),
        outcome.value,
        outcome.canonical_value,
        outcome.best_restart
    );
    if outcome.non_convergence() {
        let _ = writeln!(
            err,
            "warning: NonConvergence: iteration budget exhausted while still improving; value is an upper bound"
        );
    }
    let file = FrameFile::from_frame(&problem.frame, &problem.model.p, Some(&outcome.dual));
    emit(out, &json!({ "search": outcome, "frame_file": file }))?;
    Ok(0)
}

fn construct(probabilities: &[f64], dimension: usize, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let model = weights_from_probabilities(probabilities, dimension)?;
    let f = construct_probability_uniform_parseval(&model, dimension)?;
    let _ = writeln!(err, "construct: Parseval frame of {} vectors in dimension {dimension}", f.len());
    emit(out, &FrameFile::from_frame(&f, probabilities, None))?;
    Ok(0)
}

fn simulate_cmd(input: &Path, cfg: SimConfig, dual: Option<DualArg>, tol: &Tolerances, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let problem = load(input)?;
    warn_weights(&problem, err);
    let (g, source) = pick_dual(&problem, dual, tol)?;
    let report = simulate(&problem.frame, &g, &problem.model, &cfg)?;
    let _ = writeln!(
        err,
        "simulate: {} samples, dual = {source}, max {} / bound {} (ratio {})",
        report.samples, report.max_error, report.bound, report.ratio
    );
    emit(out, &report)?;
    Ok(0)
}

fn verify(dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cfg = SearchConfig::default();
    let rows = match dir {
        Some(d) => golden::verify_dir(d, &cfg),
        None => golden::verify_embedded(&cfg),
    };
    for r in &rows {
        let status = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::PaperDiscrepancy => "paper-discrepancy",
        };
        let _ = write!(err, "{:<18} {:<20} {:<40} expected {} got {}", status, r.fixture, r.check, r.expected, r.actual);
        if let Some(p) = &r.paper {
            let _ = write!(err, " (printed {p})");
        }
        if let Some(n) = &r.note {
            let _ = write!(err, " [{n}]");
        }
        let _ = writeln!(err);
    }
    let ok = golden::all_pass(&rows);
    emit(out, &json!({ "all_pass": ok, "rows": rows }))?;
    Ok(if ok { 0 } else { 1 })
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let tol = Tolerances::resolve(cli.tol)
        .map_err(|raw| Failure::schema(format!("{ENV_VAR}={raw:?} is not a positive number")))?;
    match cli.command {
        Command::Analyze { input, m, measure, dual } => analyze(&input, m, measure, dual, &tol, out, err),
        Command::Search {
            input,
            seed,
            restarts,
            iters,
            step,
            measure,
        } => {
            let cfg = SearchConfig {
                max_iters: iters,
                restarts,
                seed,
                step,
                ..SearchConfig::default()
            };
            search(&input, cfg, measure, out, err)
        }
        Command::Construct { probabilities, dimension } => construct(&probabilities, dimension, out, err),
        Command::Simulate {
            input,
            trials,
            signals,
            m,
            seed,
            mode,
            dual,
        } => {
            let cfg = SimConfig {
                trials,
                signals,
                m,
                seed,
                mode: match mode {
                    ModeArg::Raw => SimMode::Raw,
                    ModeArg::Weighted => SimMode::Weighted,
                },
                dual_tol: tol.dual,
            };
            simulate_cmd(&input, cfg, dual, &tol, out, err)
        }
        Command::VerifyExamples { fixtures_dir } => verify(fixtures_dir.as_deref(), out, err),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
