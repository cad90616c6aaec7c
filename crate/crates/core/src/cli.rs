//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification run found violations, 2 usage or
//! input error. Timing goes to stderr so structured stdout is reproducible.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::family::{ElementSet, Family, DEFAULT_GROUND_CAP};
use crate::football::{analyze, Board, FourElementRule};
use crate::solver::{GameStatus, MarginProfile, Solver, SolverConfig};
use crate::verify::{self, Theorem, VerifyOptions, VerifyRange, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "picker-chooser", version, about = "Solve and verify picker-chooser games")]
pub struct Cli {
    /// Largest ground set the solver accepts.
    #[arg(long, global = true, env = "PICKER_CHOOSER_GROUND_CAP", default_value_t = DEFAULT_GROUND_CAP)]
    pub ground_cap: usize,
    /// Maximum number of memo entries.
    #[arg(long, global = true, env = "PICKER_CHOOSER_MEMO_CAPACITY", default_value_t = 1 << 26)]
    pub memo_capacity: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide both games on a family and report first-offer margins.
    Solve(SolveArgs),
    /// Analyse football on a board of scores.
    Football(FootballArgs),
    /// Check a theorem over enumerated or sampled families.
    Verify(VerifyArgs),
    /// Count (and optionally list) the increasing families of C([n],k).
    Enumerate(EnumerateArgs),
    /// Search for an increasing family Bob wins with an empty margin.
    Witness(WitnessArgs),
    /// Run the HTTP game service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Family file (structured or compact form).
    #[arg(long, conflicts_with = "sets", required_unless_present = "sets")]
    pub family: Option<PathBuf>,
    /// Inline family, e.g. `12,13,23` (needs --n) or a JSON document.
    #[arg(long)]
    pub sets: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FootballArgs {
    /// Comma-separated scores: integers, decimals or p/q.
    #[arg(long)]
    pub board: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem name, or `all`.
    #[arg(long)]
    pub theorem: String,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub n_max: usize,
    /// Enumerate every family in range (the default).
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Seeded samples per ground-set size.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest n enumerated exhaustively.
    #[arg(long, env = "PICKER_CHOOSER_EXHAUSTIVE_CAP", default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub exhaustive_cap: usize,
    /// Write each violating family here as a replayable file.
    #[arg(long)]
    pub violations_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Omit to cover every k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Print each family as well as the count.
    #[arg(long)]
    pub stream: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub n_max: usize,
    /// Ignore families with k = 1 or k = n - 1.
    #[arg(long)]
    pub interior: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Sessions are loaded from and saved to this file.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

/// An input problem; the message names the offending token.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(String);

fn input<E: std::fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

/// Runs the CLI on `argv` against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // Unlocked handles: the service logs to stderr from worker threads.
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let solver = Solver::with_config(SolverConfig {
        ground_cap: cli.ground_cap,
        memo_capacity: cli.memo_capacity,
    });
    match cli.command {
        Command::Solve(a) => solve(&solver, a, out, err),
        Command::Football(a) => football(&solver, a, out),
        Command::Verify(a) => run_verify(&solver, a, out, err),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Witness(a) => witness(&solver, a, out),
        Command::Serve(a) => serve(solver, a),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), InputError> {
    writeln!(out, "{text}").map_err(input)
}

#[derive(Serialize)]
struct Intervals {
    u_a: String,
    l_a: String,
    u_b: String,
    l_b: String,
}

#[derive(Serialize)]
struct SolveOutput {
    n: usize,
    k: usize,
    sets: Vec<Vec<usize>>,
    members: usize,
    increasing: bool,
    status: GameStatus,
    margins: Option<MarginProfile>,
    intervals: Option<Intervals>,
    first_offers: Option<ElementSet>,
}

fn load_family(a: &SolveArgs) -> Result<Family, InputError> {
    let text = match (&a.family, &a.sets) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(InputError("one of --family or --sets is required".into())),
    };
    Family::parse(&text, a.n, a.k).map_err(input)
}

fn solve(solver: &Solver, a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let f = load_family(&a)?;
    let start = Instant::now();
    let status = solver.status(&f).map_err(input)?;
    let margins = if f.is_terminal() {
        None
    } else {
        Some(solver.margin_profile(&f).map_err(input)?)
    };
    let _ = writeln!(err, "solved in {:.3?}", start.elapsed());
    let increasing = f.is_increasing();
    let intervals = margins.filter(|_| increasing).map(|p| Intervals {
        u_a: p.u_a.interval_notation(),
        l_a: p.l_a.interval_notation(),
        u_b: p.u_b.interval_notation(),
        l_b: p.l_b.interval_notation(),
    });
    let report = SolveOutput {
        n: f.n(),
        k: f.k(),
        sets: f.iter().map(|s| s.iter().collect()).collect(),
        members: f.len(),
        increasing,
        status,
        margins,
        intervals,
        first_offers: margins.map(|p| p.alice_margin()),
    };
    match a.format {
        Format::Json => emit(out, &serde_json::to_string(&report).map_err(input)?)?,
        Format::Human => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            emit(out, &format!("family      {f}"))?;
            emit(out, &format!("members     {}", f.len()))?;
            emit(out, &format!("increasing  {}", yn(increasing)))?;
            emit(out, &format!("Alice wins  {}", yn(status.alice)))?;
            emit(out, &format!("Bob wins    {}", yn(status.bob)))?;
            match (report.margins, &report.intervals) {
                (_, Some(iv)) => {
                    emit(out, &format!("U_A {}  L_A {}", iv.u_a, iv.l_a))?;
                    emit(out, &format!("U_B {}  L_B {}", iv.u_b, iv.l_b))?;
                }
                (Some(p), None) => {
                    emit(out, &format!("U_A {:?}  L_A {:?}", list(p.u_a), list(p.l_a)))?;
                    emit(out, &format!("U_B {:?}  L_B {:?}", list(p.u_b), list(p.l_b)))?;
                }
                (None, None) => emit(out, "terminal family, no moves")?,
            }
            if let Some(p) = report.margins {
                let offers = list(p.alice_margin());
                if offers.is_empty() {
                    emit(out, "Alice has no winning first offer")?;
                } else {
                    emit(out, &format!("winning first offers {offers:?}"))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn list(s: ElementSet) -> Vec<usize> {
    s.iter().collect()
}

#[derive(Serialize)]
struct FootballOutput {
    #[serde(flatten)]
    analysis: crate::football::FootballAnalysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    four_element_rule: Option<FourElementRule>,
}

fn football(solver: &Solver, a: FootballArgs, out: &mut dyn Write) -> Result<i32, InputError> {
    let board = Board::parse(&a.board).map_err(input)?;
    let analysis = analyze(solver, &board).map_err(input)?;
    let rule = if board.len() == 4 {
        Some(FourElementRule::for_board(&board).map_err(input)?)
    } else {
        None
    };
    match a.format {
        Format::Json => {
            let o = FootballOutput {
                analysis,
                four_element_rule: rule,
            };
            emit(out, &serde_json::to_string(&o).map_err(input)?)?
        }
        Format::Human => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            emit(out, &format!("board        {board}"))?;
            emit(out, &format!("m            {}", analysis.m))?;
            emit(out, &format!("Alice wins   {}", yn(analysis.alice_wins)))?;
            emit(out, &format!("Bob wins     {}", yn(analysis.bob_wins)))?;
            emit(out, &format!("level result {}", yn(analysis.draw_possible)))?;
            emit(out, &format!("tie split    {}", yn(analysis.tie_capable)))?;
            if let Some(r) = rule {
                let text = match r {
                    FourElementRule::KeepTop => "Bob keeps the top score away from Alice",
                    FourElementRule::ForceBottom => "Bob forces the bottom score onto Alice",
                };
                emit(out, &format!("Bob's plan   {text}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(solver: &Solver, a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let theorems: Vec<Theorem> = if a.theorem == "all" {
        Theorem::ALL.to_vec()
    } else {
        vec![a.theorem.parse::<Theorem>().map_err(InputError)?]
    };
    let range = match a.samples {
        Some(s) => VerifyRange::sampled(a.n_min, a.n_max, s, a.seed),
        None => VerifyRange::exhaustive(a.n_min, a.n_max),
    };
    let options = VerifyOptions {
        exhaustive_cap: a.exhaustive_cap,
    };
    let mut failed = false;
    for t in theorems {
        let report = verify::verify_with(solver, t, range, options).map_err(input)?;
        let _ = writeln!(err, "{t}: {:.3?}", report.elapsed);
        failed |= !report.passed();
        if let Some(dir) = &a.violations_dir {
            if !report.passed() {
                let paths = verify::write_violations(&report, dir).map_err(input)?;
                let _ = writeln!(err, "{t}: wrote {} violation files to {}", paths.len(), dir.display());
            }
        }
        match a.format {
            Format::Json => emit(out, &serde_json::to_string(&report).map_err(input)?)?,
            Format::Human => {
                emit(out, &report.summary())?;
                for v in report.violations.iter().take(10) {
                    emit(out, &format!("  {}: {}", v.family, v.detail))?;
                }
            }
        }
    }
    Ok(if failed { EXIT_VIOLATIONS } else { EXIT_OK })
}

#[derive(Serialize)]
struct CountLine {
    n: usize,
    k: usize,
    count: u64,
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Result<i32, InputError> {
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (0..=a.n).collect(),
    };
    for k in ks {
        let mut count = 0u64;
        for f in verify::enumerate_increasing(a.n, k).map_err(input)? {
            count += 1;
            if a.stream {
                match a.format {
                    Format::Json => emit(out, &f.to_json())?,
                    Format::Human => emit(out, &f.to_string())?,
                }
            }
        }
        let line = CountLine { n: a.n, k, count };
        match a.format {
            Format::Json => emit(out, &serde_json::to_string(&line).map_err(input)?)?,
            Format::Human => emit(out, &format!("C([{}],{k}): {count} increasing families", a.n))?,
        }
    }
    Ok(EXIT_OK)
}

fn witness(solver: &Solver, a: WitnessArgs, out: &mut dyn Write) -> Result<i32, InputError> {
    let found = if a.interior {
        verify::find_interior_empty_margin_bob_win(solver, a.n_max)
    } else {
        verify::find_empty_margin_bob_win(solver, a.n_max)
    }
    .map_err(input)?;
    match (a.format, found) {
        (Format::Json, f) => emit(
            out,
            &serde_json::to_string(&serde_json::json!({ "n_max": a.n_max, "witness": f })).map_err(input)?,
        )?,
        (Format::Human, Some(f)) => {
            let p = solver.margin_profile(&f).map_err(input)?;
            emit(out, &format!("witness     {f}"))?;
            emit(out, &format!("U_B {}  L_B {}", p.u_b.interval_notation(), p.l_b.interval_notation()))?;
        }
        (Format::Human, None) => emit(out, &format!("no witness with n <= {}", a.n_max))?,
    }
    Ok(EXIT_OK)
}

fn serve(solver: Solver, a: ServeArgs) -> Result<i32, InputError> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();
    let addr: SocketAddr = format!("{}:{}", a.host, a.port)
        .parse()
        .map_err(|e| InputError(format!("bad address `{}:{}`: {e}", a.host, a.port)))?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(input)?;
    runtime
        .block_on(crate::service::serve(addr, Arc::new(solver), a.snapshot))
        .map_err(input)?;
    Ok(EXIT_OK)
}
