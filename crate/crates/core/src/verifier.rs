//! Exhaustive certification of strategies against every opponent reply.
//!
//! A winning claim explores every second-player reply at every ply; a
//! blocking claim explores every first-player move. Subtrees are shared when
//! the strategy reaches the same (coloring, memory) pair twice: the
//! continuation is then identical, so the deduplication is exact.
//!
//! A refutation is reported as a [`CounterexampleTrace`] in a small text
//! format:
//!
//! ```text
//! game 2K2 K5 BOB_STAR_BLOCK_COMPLETE strict
//! # blue completed the pattern
//! ,0 A 0 1
//! ,1 B 0 2
//! ,2 A 2 3
//! result FirstWin
//! ```

use std::collections::HashSet;
use std::fmt;
use std::hash::BuildHasherDefault;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::arena::{bits, completes, status, ArenaError, Board, Coloring, GameStatus, MoveRecord, Player, Position};
use crate::pattern::{parse_pattern, PatternError, PatternGraph};
use crate::solver::FastHasher;
use crate::strategies::{
    leaf_invariant_violation, pair_invariant_violation, strategy_move_unchecked, StrategyError, StrategyId,
    StrategyMemory,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyMode {
    /// The first player completes the pattern, and the opponent never does
    /// so earlier.
    Winning,
    /// Blue never contains the pattern, even if play continues after red
    /// completes it.
    StrictNoBlue,
    /// Blue never completes the pattern strictly before red does.
    NotFirstWin,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::Winning => "win",
            VerifyMode::StrictNoBlue => "strict",
            VerifyMode::NotFirstWin => "notfirstwin",
        }
    }
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifyMode {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "win" | "winning" => Ok(VerifyMode::Winning),
            "strict" | "strictnoblue" => Ok(VerifyMode::StrictNoBlue),
            "notfirstwin" => Ok(VerifyMode::NotFirstWin),
            _ => Err(VerifyError::Trace(format!("unknown mode `{s}`"))),
        }
    }
}

/// Whether out-of-domain strategies are rejected or run anyway.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DomainPolicy {
    #[default]
    Enforce,
    Permit,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{id} plays {role:?}, but this claim needs the other player")]
    WrongRole { id: StrategyId, role: Player },
    #[error("bad trace: {0}")]
    Trace(String),
    #[error("trace replays to {actual}, but states {stated}")]
    ReplayMismatch { stated: TraceResult, actual: TraceResult },
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Proof object: every branch satisfied the claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub strategy: StrategyId,
    pub pattern: String,
    pub board: String,
    pub mode: VerifyMode,
    /// Strategy moves allowed per branch (winning claims); edge count otherwise.
    pub round_bound: usize,
    /// Opponent moves examined.
    pub branches_explored: u64,
    pub dedup_hits: u64,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "certified {} {} on {} mode={} round_bound={} branches={} dedup_hits={}",
            self.strategy, self.pattern, self.board, self.mode, self.round_bound, self.branches_explored, self.dedup_hits
        )
    }
}

/// Final line of a trace. `Ongoing` marks a trace cut short by a strategy
/// failure or the round bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceResult {
    FirstWin,
    SecondWin,
    Draw,
    NoBlue,
    Ongoing,
}

impl fmt::Display for TraceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceResult::FirstWin => "FirstWin",
            TraceResult::SecondWin => "SecondWin",
            TraceResult::Draw => "Draw",
            TraceResult::NoBlue => "NoBlue",
            TraceResult::Ongoing => "Ongoing",
        })
    }
}

impl FromStr for TraceResult {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FirstWin" => Ok(TraceResult::FirstWin),
            "SecondWin" => Ok(TraceResult::SecondWin),
            "Draw" => Ok(TraceResult::Draw),
            "NoBlue" => Ok(TraceResult::NoBlue),
            "Ongoing" => Ok(TraceResult::Ongoing),
            _ => Err(VerifyError::Trace(format!("unknown result `{s}`"))),
        }
    }
}

impl From<GameStatus> for TraceResult {
    fn from(s: GameStatus) -> Self {
        match s {
            GameStatus::FirstWin => TraceResult::FirstWin,
            GameStatus::SecondWin => TraceResult::SecondWin,
            GameStatus::Draw => TraceResult::Draw,
            GameStatus::Ongoing => TraceResult::Ongoing,
        }
    }
}

/// A play that refutes a claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleTrace {
    pub pattern: String,
    pub board: String,
    pub strategy: StrategyId,
    pub mode: VerifyMode,
    /// Moves as vertex pairs, in play order.
    pub moves: Vec<(MoveRecord, (usize, usize))>,
    pub result: TraceResult,
    pub violated: String,
}

impl CounterexampleTrace {
    pub fn to_text(&self) -> String {
        let mut out = format!("game {} {} {} {}\n", self.pattern, self.board, self.strategy, self.mode);
        for line in self.violated.lines() {
            out.push_str(&format!("# {line}\n"));
        }
        for (rec, (u, v)) in &self.moves {
            out.push_str(&format!(",{} {} {} {}\n", rec.ply_index, rec.player.letter(), u, v));
        }
        out.push_str(&format!("result {}\n", self.result));
        out
    }

    pub fn parse(text: &str) -> Result<Self, VerifyError> {
        let bad = |why: String| VerifyError::Trace(why);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("empty trace".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let ["game", pattern, board, strategy, mode] = fields[..] else {
            return Err(bad(format!("bad header `{header}`")));
        };
        let parsed_board: Board = board.parse()?;
        parse_pattern(pattern)?;
        let strategy: StrategyId = strategy.parse()?;
        let mode: VerifyMode = mode.parse()?;
        let mut moves = Vec::new();
        let mut violated = Vec::new();
        let mut result = None;
        for line in lines {
            if let Some(comment) = line.strip_prefix('#') {
                violated.push(comment.trim().to_string());
                continue;
            }
            if result.is_some() {
                return Err(bad(format!("line after result: `{line}`")));
            }
            if let Some(r) = line.strip_prefix("result") {
                result = Some(r.trim().parse()?);
                continue;
            }
            let body = line.strip_prefix(',').unwrap_or(line);
            let parts: Vec<&str> = body.split_whitespace().collect();
            let [ply, who, u, v] = parts[..] else {
                return Err(bad(format!("bad move line `{line}`")));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad number in `{line}`")));
            let (ply, u, v) = (num(ply)?, num(u)?, num(v)?);
            let player = match who {
                "A" => Player::First,
                "B" => Player::Second,
                _ => return Err(bad(format!("bad player in `{line}`"))),
            };
            if ply != moves.len() || player != Player::to_move(ply) {
                return Err(bad(format!("out-of-order move `{line}`")));
            }
            let edge = parsed_board
                .edge_between(u, v)
                .ok_or_else(|| bad(format!("{u}-{v} is not an edge of {board}")))?;
            moves.push((MoveRecord { ply_index: ply, player, edge }, (u, v)));
        }
        let result = result.ok_or_else(|| bad("missing result line".into()))?;
        Ok(Self {
            pattern: pattern.to_string(),
            board: board.to_string(),
            strategy,
            mode,
            moves,
            result,
            violated: violated.join("\n"),
        })
    }

    /// Replays the moves through the arena and returns the terminal result;
    /// fails if it differs from the stated one or a move is illegal.
    pub fn replay(&self) -> Result<TraceResult, VerifyError> {
        let board: Arc<Board> = Arc::new(self.board.parse()?);
        let pattern = parse_pattern(&self.pattern)?;
        let actual = match self.mode {
            VerifyMode::StrictNoBlue => {
                // Blue-only view: play may continue after red completes.
                let mut c = Coloring::default();
                let last = self.moves.len();
                for (i, (rec, _)) in self.moves.iter().enumerate() {
                    if c.colored() >> rec.edge & 1 == 1 {
                        return Err(ArenaError::AlreadyColored(rec.edge).into());
                    }
                    let blue_done = rec.player == Player::First
                        && completes(&board, c, &pattern, rec.edge, Player::First);
                    c = c.with(rec.edge, rec.player);
                    if blue_done && i + 1 != last {
                        return Err(VerifyError::Trace("moves continue after blue completed".into()));
                    }
                }
                if crate::pattern::contains(&board.host(c.blue), &pattern) {
                    TraceResult::FirstWin
                } else if c.colored() == board.full_mask() {
                    TraceResult::NoBlue
                } else {
                    TraceResult::Ongoing
                }
            }
            _ => {
                let mut game = crate::arena::Game::new(Arc::new(pattern), board);
                for (rec, _) in &self.moves {
                    game.play(rec.edge)?;
                }
                game.status().into()
            }
        };
        if actual != self.result {
            return Err(VerifyError::ReplayMismatch { stated: self.result, actual });
        }
        Ok(actual)
    }
}

impl fmt::Display for CounterexampleTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified(Certificate),
    Refuted(CounterexampleTrace),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refuted(_) => None,
        }
    }

    pub fn trace(&self) -> Option<&CounterexampleTrace> {
        match self {
            Verdict::Refuted(t) => Some(t),
            Verdict::Certified(_) => None,
        }
    }
}

type Visited = HashSet<StrategyMemory, BuildHasherDefault<FastHasher>>;

/// Reason and result of a refuted branch; the path is kept by the search.
struct Refutation {
    violated: String,
    result: TraceResult,
}

struct Search<'a> {
    id: StrategyId,
    pattern: &'a PatternGraph,
    board: Arc<Board>,
    mode: VerifyMode,
    round_bound: usize,
    path: Vec<usize>,
    visited: Visited,
    branches: u64,
    dedup_hits: u64,
}

impl Search<'_> {
    fn full(&self, c: Coloring) -> bool {
        c.colored() == self.board.full_mask()
    }

    fn open(&self, c: Coloring) -> u128 {
        self.board.full_mask() & !c.colored()
    }

    fn strategy(&self, c: Coloring, mem: &StrategyMemory) -> Result<(usize, StrategyMemory), Refutation> {
        let position = Position::from_coloring(self.board.clone(), c);
        strategy_move_unchecked(self.id, self.pattern, &position, mem).map_err(|err| Refutation {
            violated: format!("strategy failed: {err}"),
            result: self.result_of(c),
        })
    }

    /// Result line for a refutation ending at `c`.
    fn result_of(&self, c: Coloring) -> TraceResult {
        match self.mode {
            VerifyMode::StrictNoBlue => {
                if crate::pattern::contains(&self.board.host(c.blue), self.pattern) {
                    TraceResult::FirstWin
                } else if self.full(c) {
                    TraceResult::NoBlue
                } else {
                    TraceResult::Ongoing
                }
            }
            _ => status(&self.board, c, self.pattern).into(),
        }
    }

    fn refute(&self, c: Coloring, violated: impl Into<String>) -> Refutation {
        Refutation { violated: violated.into(), result: self.result_of(c) }
    }

    /// First player (the strategy) to move in `c`, having made `rounds` moves.
    fn winning(&mut self, c: Coloring, mem: StrategyMemory, rounds: usize) -> Result<(), Refutation> {
        if rounds >= self.round_bound {
            return Err(self.refute(c, format!("no win within {} strategy moves", self.round_bound)));
        }
        let (e, mem) = self.strategy(c, &mem)?;
        self.path.push(e);
        let won = completes(&self.board, c, self.pattern, e, Player::First);
        let c = c.with(e, Player::First);
        if won {
            self.branches += 1;
            self.path.pop();
            return Ok(());
        }
        if self.full(c) {
            return Err(self.refute(c, "board filled without a first-player win"));
        }
        if !self.visited.insert(mem) {
            self.dedup_hits += 1;
            self.path.pop();
            return Ok(());
        }
        for f in bits(self.open(c)) {
            self.branches += 1;
            self.path.push(f);
            let red_won = completes(&self.board, c, self.pattern, f, Player::Second);
            let c2 = c.with(f, Player::Second);
            if red_won {
                return Err(self.refute(c2, "second player completed the pattern first"));
            }
            if self.full(c2) {
                return Err(self.refute(c2, "board filled without a first-player win"));
            }
            self.winning(c2, mem, rounds + 1)?;
            self.path.pop();
        }
        self.path.pop();
        Ok(())
    }

    /// First player (the opponent) to move in `c`.
    fn blocking(&mut self, c: Coloring, mem: StrategyMemory) -> Result<(), Refutation> {
        for e in bits(self.open(c)) {
            self.branches += 1;
            self.path.push(e);
            let blue_won = completes(&self.board, c, self.pattern, e, Player::First);
            let c1 = c.with(e, Player::First);
            if blue_won {
                return Err(self.refute(c1, "first player completed the pattern"));
            }
            if self.full(c1) {
                self.path.pop();
                continue;
            }
            let (f, mem2) = self.strategy(c1, &mem)?;
            self.path.push(f);
            let red_won = completes(&self.board, c1, self.pattern, f, Player::Second);
            let c2 = c1.with(f, Player::Second);
            if self.id.keeps_leaf_invariant() {
                if let Some(why) = leaf_invariant_violation(&self.board, c2) {
                    return Err(self.refute(c2, format!("leaf invariant violated: {why}")));
                }
            }
            if self.id == StrategyId::BobDstarPair {
                if let Some(why) = pair_invariant_violation(&self.board, c2) {
                    return Err(self.refute(c2, format!("pairing invariant violated: {why}")));
                }
            }
            let stop = (red_won && self.mode == VerifyMode::NotFirstWin) || self.full(c2);
            if !stop {
                if self.visited.insert(mem2) {
                    self.blocking(c2, mem2)?;
                } else {
                    self.dedup_hits += 1;
                }
            }
            self.path.pop();
            self.path.pop();
        }
        Ok(())
    }

    fn trace(&self, refutation: Refutation) -> CounterexampleTrace {
        let moves = self
            .path
            .iter()
            .enumerate()
            .map(|(ply, &edge)| {
                (MoveRecord { ply_index: ply, player: Player::to_move(ply), edge }, self.board.endpoints(edge))
            })
            .collect();
        CounterexampleTrace {
            pattern: self.pattern.render(),
            board: self.board.spec(),
            strategy: self.id,
            mode: self.mode,
            moves,
            result: refutation.result,
            violated: refutation.violated,
        }
    }
}

fn prepare(
    id: StrategyId,
    pattern: &PatternGraph,
    board: &Board,
    role: Player,
    policy: DomainPolicy,
) -> Result<(), VerifyError> {
    if id.role() != role {
        return Err(VerifyError::WrongRole { id, role: id.role() });
    }
    if policy == DomainPolicy::Enforce {
        id.check_domain(pattern, board)?;
    }
    Ok(())
}

/// Certifies that first-player strategy `id` completes `pattern` on `board`
/// within `round_bound` of its own moves (default: the edge count) against
/// every reply.
pub fn verify_winning(
    id: StrategyId,
    pattern: &PatternGraph,
    board: &Board,
    round_bound: Option<usize>,
    policy: DomainPolicy,
) -> Result<Verdict, VerifyError> {
    prepare(id, pattern, board, Player::First, policy)?;
    let round_bound = round_bound.unwrap_or(board.edge_count());
    let mut search = Search {
        id,
        pattern,
        board: Arc::new(board.clone()),
        mode: VerifyMode::Winning,
        round_bound,
        path: Vec::new(),
        visited: Visited::default(),
        branches: 0,
        dedup_hits: 0,
    };
    Ok(match search.winning(Coloring::default(), StrategyMemory::new(), 0) {
        Ok(()) => Verdict::Certified(Certificate {
            strategy: id,
            pattern: pattern.render(),
            board: board.spec(),
            mode: VerifyMode::Winning,
            round_bound,
            branches_explored: search.branches,
            dedup_hits: search.dedup_hits,
        }),
        Err(r) => Verdict::Refuted(search.trace(r)),
    })
}

/// Certifies that second-player strategy `id` prevents `pattern` in the
/// sense of `mode` against every first-player line.
pub fn verify_blocking(
    id: StrategyId,
    pattern: &PatternGraph,
    board: &Board,
    mode: VerifyMode,
    policy: DomainPolicy,
) -> Result<Verdict, VerifyError> {
    if mode == VerifyMode::Winning {
        return Err(VerifyError::Trace("blocking claims use strict or notfirstwin".into()));
    }
    prepare(id, pattern, board, Player::Second, policy)?;
    let mut search = Search {
        id,
        pattern,
        board: Arc::new(board.clone()),
        mode,
        round_bound: board.edge_count(),
        path: Vec::new(),
        visited: Visited::default(),
        branches: 0,
        dedup_hits: 0,
    };
    Ok(match search.blocking(Coloring::default(), StrategyMemory::new()) {
        Ok(()) => Verdict::Certified(Certificate {
            strategy: id,
            pattern: pattern.render(),
            board: board.spec(),
            mode,
            round_bound: board.edge_count(),
            branches_explored: search.branches,
            dedup_hits: search.dedup_hits,
        }),
        Err(r) => Verdict::Refuted(search.trace(r)),
    })
}
