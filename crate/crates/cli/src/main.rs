//! `rach`: solve, number, verify and play Ramsey achievement games.

mod play;
mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rach_core::solver::{cache_file_name, SolveError, TranspositionTable};
use rach_core::{
    achievement_number, parse_pattern, verify_blocking, verify_winning, Board, BoardFamily, DomainPolicy, Limits,
    PatternGraph, Player, Solver, StrategyId, Verdict, VerifyError, VerifyMode,
};
use thiserror::Error;

/// Environment variable naming the default transposition-table directory.
pub const TT_DIR_ENV: &str = "RACH_TT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::BadInput(_) | CliError::Io(_) => 4,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Unknown { .. } | SolveError::TableFull { .. } => CliError::Budget(e.to_string()),
            SolveError::Io(io) => CliError::Io(io),
            other => CliError::BadInput(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

fn bad(e: impl std::fmt::Display) -> CliError {
    CliError::BadInput(e.to_string())
}

#[derive(Parser)]
#[command(name = "rach", version, about = "Exact analysis of Ramsey achievement games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value of a game from the empty board.
    Solve(SolveArgs),
    /// Smallest board size with a first-player win.
    Number(NumberArgs),
    /// Exhaustively check a catalog strategy.
    Verify(VerifyArgs),
    /// Recompute a table of known achievement numbers.
    Table(table::TableArgs),
    /// Play against the solver or a catalog strategy in the terminal.
    Play(play::PlayArgs),
    /// Inspect or clear the transposition-table directory.
    Cache(CacheArgs),
}

#[derive(Args)]
struct GameArgs {
    /// Pattern DSL, e.g. `3K2`, `K1,4`, `S2,1`, `edges:(0,1)(1,2)`.
    #[arg(long)]
    pattern: String,
    /// Board spec: `K<n>` or `K<n1>,<n2>`.
    #[arg(long)]
    board: String,
}

impl GameArgs {
    fn parse(&self) -> Result<(PatternGraph, Board), CliError> {
        let pattern = parse_pattern(&self.pattern).map_err(bad)?;
        let board: Board = self.board.parse().map_err(bad)?;
        Ok((pattern, board))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Give up (exit 3) after expanding this many nodes.
    #[arg(long, default_value_t = rach_core::solver::DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
    /// Transposition-table file to load (if present) and save.
    #[arg(long)]
    tt_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// `K_n`.
    Complete,
    /// `K_{n,n}`.
    Square,
}

#[derive(Args)]
struct NumberArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    max_n: usize,
    #[arg(long, default_value_t = rach_core::solver::DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// The strategy's player wins (first-player strategies).
    Win,
    /// Blue never completes the pattern.
    Strict,
    /// Blue never completes the pattern strictly before red.
    Notfirstwin,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    strategy: String,
    #[command(flatten)]
    game: GameArgs,
    /// Defaults to `win` for first-player strategies, `strict` otherwise.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Strategy moves allowed per branch (winning claims only).
    #[arg(long)]
    round_bound: Option<usize>,
    /// Run the strategy even outside its declared domain.
    #[arg(long)]
    force: bool,
    /// Where to write a refuting trace (stdout otherwise).
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct CacheArgs {
    /// Directory holding `.rtt` files; defaults to $RACH_TT_DIR.
    #[arg(long, global = true)]
    dir: Option<PathBuf>,
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the cache directory.
    Path,
    /// List table files with their game and entry count.
    List,
    /// Delete every table file in the directory.
    Clear,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Number(a) => cmd_number(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => table::run(a),
        Command::Play(a) => play::run(a),
        Command::Cache(a) => cmd_cache(a),
    }
}

/// Table file for a game: explicit `--tt-file`, else `$RACH_TT_DIR/<name>`.
fn table_path(explicit: Option<PathBuf>, pattern: &PatternGraph, board: &Board) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(TT_DIR_ENV).map(|d| PathBuf::from(d).join(cache_file_name(pattern, board))))
}

fn cmd_solve(a: SolveArgs) -> Result<u8, CliError> {
    let (pattern, board) = a.game.parse()?;
    let path = table_path(a.tt_file, &pattern, &board);
    let mut solver = Solver::new(Arc::new(pattern), Arc::new(board), Limits::nodes(a.budget_nodes))?;
    if let Some(p) = path.as_deref().filter(|p| p.exists()) {
        solver = solver.with_table(TranspositionTable::load(p)?)?;
    }
    let outcome = solver.solve()?;
    if let Some(p) = path {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        solver.table().save(&p)?;
    }
    let stats = solver.stats();
    println!("outcome={outcome}");
    println!("nodes={} table_hits={} max_depth={}", stats.nodes_expanded, stats.table_hits, stats.max_depth);
    Ok(0)
}

fn cmd_number(a: NumberArgs) -> Result<u8, CliError> {
    let pattern = parse_pattern(&a.pattern).map_err(bad)?;
    let family = match a.family {
        FamilyArg::Complete => BoardFamily::Complete,
        FamilyArg::Square => BoardFamily::SquareBipartite,
    };
    match achievement_number(&pattern, family, a.max_n, Limits::nodes(a.budget_nodes)) {
        Ok(n) => println!("{n}"),
        Err(SolveError::ExceedsBound { n_max }) => println!("none<={n_max}"),
        Err(e) => return Err(e.into()),
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, CliError> {
    let id: StrategyId = a.strategy.parse().map_err(bad)?;
    let (pattern, board) = a.game.parse()?;
    let policy = if a.force { DomainPolicy::Permit } else { DomainPolicy::Enforce };
    let mode = match a.mode {
        Some(ModeArg::Win) => VerifyMode::Winning,
        Some(ModeArg::Strict) => VerifyMode::StrictNoBlue,
        Some(ModeArg::Notfirstwin) => VerifyMode::NotFirstWin,
        None if id.role() == Player::First => VerifyMode::Winning,
        None => VerifyMode::StrictNoBlue,
    };
    let verdict = match mode {
        VerifyMode::Winning => verify_winning(id, &pattern, &board, a.round_bound, policy)?,
        other => verify_blocking(id, &pattern, &board, other, policy)?,
    };
    match verdict {
        Verdict::Certified(cert) => {
            println!("{cert}");
            Ok(0)
        }
        Verdict::Refuted(trace) => {
            let text = trace.to_text();
            match a.trace_out {
                Some(path) => {
                    fs::write(&path, &text)?;
                    println!("refuted: {} (trace written to {})", trace.violated, path.display());
                }
                None => print!("{text}"),
            }
            Ok(2)
        }
    }
}

fn cache_dir(explicit: Option<PathBuf>) -> Result<PathBuf, CliError> {
    explicit
        .or_else(|| std::env::var_os(TT_DIR_ENV).map(PathBuf::from))
        .ok_or_else(|| CliError::BadInput(format!("no cache directory: pass --dir or set {TT_DIR_ENV}")))
}

fn table_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rtt"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_cache(a: CacheArgs) -> Result<u8, CliError> {
    let dir = cache_dir(a.dir)?;
    match a.action {
        CacheAction::Path => println!("{}", dir.display()),
        CacheAction::List => {
            for path in table_files(&dir)? {
                let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                match TranspositionTable::load(&path) {
                    Ok(t) => println!("{name}\t{}\t{}\t{} entries", t.pattern_dsl(), t.board_spec(), t.len()),
                    Err(e) => println!("{name}\tunreadable: {e}"),
                }
            }
        }
        CacheAction::Clear => {
            let files = table_files(&dir)?;
            for path in &files {
                fs::remove_file(path)?;
            }
            println!("removed {} table file(s)", files.len());
        }
    }
    Ok(0)
}
