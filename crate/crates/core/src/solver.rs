//! Exact game values under optimal play.
//!
//! The search is a memoized minimax over three outcomes ordered
//! `SecondWin < Draw < FirstWin`. Positions are memoized on their canonical
//! key, so symmetric positions share one table entry. Pruning rules used
//! here never change a value:
//! - a mover who can complete the pattern wins at once;
//! - when the opponent threatens to complete, only blocking moves can do
//!   better than losing;
//! - a side that can no longer complete the pattern (not enough edges left
//!   on its color plus the open edges, or not enough turns) caps what the
//!   mover can hope for, which tightens the early exit.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::hash::{BuildHasherDefault, Hasher};
use std::io::{self, Read, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::arena::{bits, completes, status, ArenaError, Board, Coloring, GameStatus, Player, Position};
use crate::canonical::{canonical_form, CanonError, CanonicalKey, DEFAULT_BOUND};
use crate::pattern::{contains, parse_pattern, PatternError, PatternGraph};

/// Expanded-node budget used when the caller does not pick one.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Table-size cap used when the caller does not pick one. Each entry costs
/// roughly 70 bytes, so this keeps a single search under about 2 GiB.
pub const DEFAULT_TABLE_CAP: usize = 24_000_000;

const CACHE_MAGIC: &[u8] = b"RACH1\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    SecondWin,
    Draw,
    FirstWin,
}

impl Outcome {
    fn best_for(player: Player) -> Outcome {
        match player {
            Player::First => Outcome::FirstWin,
            Player::Second => Outcome::SecondWin,
        }
    }

    fn worst_for(player: Player) -> Outcome {
        Outcome::best_for(player.other())
    }

    /// Whether `self` is strictly better than `other` for `player`.
    pub fn better_for(self, other: Outcome, player: Player) -> bool {
        match player {
            Player::First => self > other,
            Player::Second => self < other,
        }
    }

    pub fn from_status(status: GameStatus) -> Option<Outcome> {
        match status {
            GameStatus::FirstWin => Some(Outcome::FirstWin),
            GameStatus::SecondWin => Some(Outcome::SecondWin),
            GameStatus::Draw => Some(Outcome::Draw),
            GameStatus::Ongoing => None,
        }
    }

    fn code(self) -> u8 {
        match self {
            Outcome::SecondWin => 0,
            Outcome::Draw => 1,
            Outcome::FirstWin => 2,
        }
    }

    fn from_code(code: u8) -> Option<Outcome> {
        match code {
            0 => Some(Outcome::SecondWin),
            1 => Some(Outcome::Draw),
            2 => Some(Outcome::FirstWin),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::FirstWin => "FirstWin",
            Outcome::Draw => "Draw",
            Outcome::SecondWin => "SecondWin",
        })
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("node budget of {budget} exceeded; value unknown")]
    Unknown { budget: u64 },
    #[error("transposition table reached {entries} entries; value unknown")]
    TableFull { entries: usize },
    #[error("no first-player win on boards up to n = {n_max}")]
    ExceedsBound { n_max: usize },
    #[error("position is already decided ({0})")]
    Terminal(GameStatus),
    #[error("first-player win on n = {won} but not on n = {lost}: board monotonicity violated")]
    MonotonicityViolation { won: usize, lost: usize },
    #[error("cache file is for {found}, expected {expected}")]
    CacheMismatch { found: String, expected: String },
    #[error("only symmetry-reduced tables can be saved")]
    RawTable,
    #[error("corrupt cache file: {0}")]
    CorruptCache(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_NODE_BUDGET, max_entries: DEFAULT_TABLE_CAP }
    }
}

impl Limits {
    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes_expanded: u64,
    pub table_hits: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

/// Whether table keys are reduced by board symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Canonical,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TtEntry {
    pub outcome: Outcome,
    /// A best move in the key's own labeling.
    pub best_edge: Option<u8>,
}

/// FxHash-style hasher; keys are already well mixed bit strings.
#[derive(Default)]
pub struct FastHasher(u64);

impl Hasher for FastHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u8(&mut self, i: u8) {
        self.write_u64(i as u64);
    }

    fn write_u64(&mut self, i: u64) {
        self.0 = (self.0.rotate_left(5) ^ i).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_u128(&mut self, i: u128) {
        self.write_u64(i as u64);
        self.write_u64((i >> 64) as u64);
    }
}

pub type FastMap<K, V> = HashMap<K, V, BuildHasherDefault<FastHasher>>;

/// Memo of exact values keyed by canonical (or raw) position keys.
#[derive(Debug, Clone)]
pub struct TranspositionTable {
    board: String,
    pattern: String,
    symmetry: Symmetry,
    entries: FastMap<CanonicalKey, TtEntry>,
}

impl TranspositionTable {
    pub fn new(board: &Board, pattern: &PatternGraph, symmetry: Symmetry) -> Self {
        Self { board: board.spec(), pattern: pattern.render(), symmetry, entries: FastMap::default() }
    }

    pub fn board_spec(&self) -> &str {
        &self.board
    }

    pub fn pattern_dsl(&self) -> &str {
        &self.pattern
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<TtEntry> {
        self.entries.get(key).copied()
    }

    /// Stores an entry unless one exists; existing values are never changed.
    pub fn insert_if_absent(&mut self, key: CanonicalKey, entry: TtEntry) {
        let stored = self.entries.entry(key).or_insert(entry);
        debug_assert_eq!(stored.outcome, entry.outcome, "conflicting exact values for {key}");
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CanonicalKey, &TtEntry)> {
        self.entries.iter()
    }

    /// Writes the versioned cache file: magic line, board spec line, pattern
    /// line, record count line, then fixed-width records
    /// `(key bytes, outcome byte, best-edge byte)` sorted by key.
    pub fn save(&self, path: &Path) -> Result<(), SolveError> {
        if self.symmetry != Symmetry::Canonical {
            return Err(SolveError::RawTable);
        }
        let mut records: Vec<(Vec<u8>, TtEntry)> =
            self.entries.iter().map(|(k, v)| (k.to_bytes(), *v)).collect();
        records.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Vec::with_capacity(64 + records.len() * 10);
        out.extend_from_slice(CACHE_MAGIC);
        writeln!(out, "{}", self.board)?;
        writeln!(out, "{}", self.pattern)?;
        writeln!(out, "{}", records.len())?;
        for (key, entry) in records {
            out.extend_from_slice(&key);
            out.push(entry.outcome.code());
            out.push(entry.best_edge.unwrap_or(u8::MAX));
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, out)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SolveError> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        let corrupt = |why: &str| SolveError::CorruptCache(why.to_string());
        let rest = bytes.strip_prefix(CACHE_MAGIC).ok_or_else(|| corrupt("bad magic or version"))?;
        let mut lines = rest.splitn(4, |&b| b == b'\n');
        let mut line = |what: &str| -> Result<String, SolveError> {
            let raw = lines.next().ok_or_else(|| corrupt(what))?;
            String::from_utf8(raw.to_vec()).map_err(|_| corrupt(what))
        };
        let board_spec = line("missing board spec")?;
        let pattern_dsl = line("missing pattern")?;
        let count: usize = line("missing record count")?.parse().map_err(|_| corrupt("bad record count"))?;
        let body = lines.next().unwrap_or(&[]);
        let board: Board = board_spec.parse()?;
        let pattern = parse_pattern(&pattern_dsl)?;
        let key_len = board.edge_count().div_ceil(4);
        let width = key_len + 2;
        if body.len() != count * width {
            return Err(corrupt("record section has the wrong length"));
        }
        let mut table = TranspositionTable::new(&board, &pattern, Symmetry::Canonical);
        for record in body.chunks_exact(width) {
            let key = CanonicalKey::from_bytes(&record[..key_len], board.edge_count())?;
            let outcome = Outcome::from_code(record[key_len]).ok_or_else(|| corrupt("bad outcome byte"))?;
            let best_edge = match record[key_len + 1] {
                u8::MAX => None,
                e if (e as usize) < board.edge_count() => Some(e),
                _ => return Err(corrupt("bad best-edge byte")),
            };
            table.entries.insert(key, TtEntry { outcome, best_edge });
        }
        Ok(table)
    }
}

/// Exact solver for one (pattern, board) pair with a persistent table.
pub struct Solver {
    board: Arc<Board>,
    pattern: Arc<PatternGraph>,
    table: TranspositionTable,
    limits: Limits,
    stats: SolveStats,
    bound: usize,
}

impl Solver {
    pub fn new(pattern: Arc<PatternGraph>, board: Arc<Board>, limits: Limits) -> Result<Self, SolveError> {
        Self::with_symmetry(pattern, board, limits, Symmetry::Canonical)
    }

    pub fn with_symmetry(
        pattern: Arc<PatternGraph>,
        board: Arc<Board>,
        limits: Limits,
        symmetry: Symmetry,
    ) -> Result<Self, SolveError> {
        if symmetry == Symmetry::Canonical {
            crate::canonical::check_bound(&board, DEFAULT_BOUND)?;
        }
        let table = TranspositionTable::new(&board, &pattern, symmetry);
        Ok(Self { board, pattern, table, limits, stats: SolveStats::default(), bound: DEFAULT_BOUND })
    }

    /// Starts from a previously saved table for the same pattern and board.
    pub fn with_table(mut self, table: TranspositionTable) -> Result<Self, SolveError> {
        if table.board != self.table.board || table.pattern != self.table.pattern || table.symmetry != self.table.symmetry {
            return Err(SolveError::CacheMismatch {
                found: format!("{} on {}", table.pattern, table.board),
                expected: format!("{} on {}", self.table.pattern, self.table.board),
            });
        }
        self.table = table;
        Ok(self)
    }

    pub fn table(&self) -> &TranspositionTable {
        &self.table
    }

    pub fn into_table(self) -> TranspositionTable {
        self.table
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn pattern(&self) -> &Arc<PatternGraph> {
        &self.pattern
    }

    /// Value of the empty board.
    pub fn solve(&mut self) -> Result<Outcome, SolveError> {
        self.value(Coloring::default())
    }

    /// Exact value of any reachable coloring.
    pub fn value(&mut self, coloring: Coloring) -> Result<Outcome, SolveError> {
        let started = Instant::now();
        let result = match Outcome::from_status(status(&self.board, coloring, &self.pattern)) {
            Some(done) => Ok(done),
            None => self.search(coloring, 0),
        };
        self.stats.elapsed += started.elapsed();
        result
    }

    /// Lowest-index move attaining the exact value of an undecided position.
    pub fn best_move(&mut self, position: &Position) -> Result<usize, SolveError> {
        let st = position.status(&self.pattern);
        if st.is_terminal() {
            return Err(SolveError::Terminal(st));
        }
        let target = self.value(position.coloring())?;
        let mover = position.to_move();
        for e in position.legal_moves() {
            let child = position.coloring().with(e, mover);
            if self.value(child)? == target {
                return Ok(e);
            }
        }
        unreachable!("some move attains the position value")
    }

    fn key(&self, coloring: Coloring) -> Result<(CanonicalKey, Option<crate::canonical::CanonicalForm>), SolveError> {
        match self.table.symmetry {
            Symmetry::Raw => Ok((CanonicalKey::raw(&self.board, coloring), None)),
            Symmetry::Canonical => {
                let form = canonical_form(&self.board, coloring, self.bound)?;
                Ok((form.key, Some(form)))
            }
        }
    }

    /// Whether `player` can still complete the pattern in `coloring`.
    fn can_still_complete(&self, coloring: Coloring, player: Player) -> bool {
        let full = self.board.full_mask();
        let open = full & !coloring.colored();
        let own = match player {
            Player::First => coloring.blue,
            Player::Second => coloring.red,
        };
        let open_count = open.count_ones() as usize;
        let turns = if coloring.to_move() == player { open_count.div_ceil(2) } else { open_count / 2 };
        if own.count_ones() as usize + turns < self.pattern.edge_count() {
            return false;
        }
        contains(&self.board.host(own | open), &self.pattern)
    }

    fn search(&mut self, coloring: Coloring, depth: usize) -> Result<Outcome, SolveError> {
        let (key, form) = self.key(coloring)?;
        if let Some(entry) = self.table.get(&key) {
            self.stats.table_hits += 1;
            return Ok(entry.outcome);
        }
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.nodes_expanded > self.limits.max_nodes {
            return Err(SolveError::Unknown { budget: self.limits.max_nodes });
        }
        if self.table.len() >= self.limits.max_entries {
            return Err(SolveError::TableFull { entries: self.table.len() });
        }

        let mover = coloring.to_move();
        let open = self.board.full_mask() & !coloring.colored();
        let (value, best_edge) = self.evaluate(coloring, open, mover, depth)?;
        let best_edge = best_edge.map(|e| match &form {
            Some(f) => f.map_edge(&self.board, e) as u8,
            None => e as u8,
        });
        self.table.insert_if_absent(key, TtEntry { outcome: value, best_edge });
        Ok(value)
    }

    fn evaluate(
        &mut self,
        coloring: Coloring,
        open: u128,
        mover: Player,
        depth: usize,
    ) -> Result<(Outcome, Option<usize>), SolveError> {
        for e in bits(open) {
            if completes(&self.board, coloring, &self.pattern, e, mover) {
                return Ok((Outcome::best_for(mover), Some(e)));
            }
        }
        let mover_can = self.can_still_complete(coloring, mover);
        let opponent_can = self.can_still_complete(coloring, mover.other());
        if !mover_can && !opponent_can {
            return Ok((Outcome::Draw, bits(open).next()));
        }
        let ceiling = if mover_can { Outcome::best_for(mover) } else { Outcome::Draw };

        let threats: u128 = if opponent_can {
            bits(open)
                .filter(|&e| completes(&self.board, coloring, &self.pattern, e, mover.other()))
                .fold(0, |m, e| m | 1 << e)
        } else {
            0
        };
        let candidates = if threats != 0 { threats } else { open };

        let own = match mover {
            Player::First => coloring.blue,
            Player::Second => coloring.red,
        };
        let mut touched = 0u32;
        for e in bits(own) {
            let (a, b) = self.board.endpoints(e);
            touched |= (1 << a) | (1 << b);
        }
        let mut order: Vec<usize> = bits(candidates).collect();
        order.sort_by_key(|&e| {
            let (a, b) = self.board.endpoints(e);
            let adjacency = (touched >> a & 1) + (touched >> b & 1);
            (std::cmp::Reverse(adjacency), e)
        });

        let mut best = Outcome::worst_for(mover);
        let mut best_edge = None;
        for e in order {
            let child = coloring.with(e, mover);
            let v = if child.colored() == self.board.full_mask() {
                Outcome::Draw
            } else {
                self.search(child, depth + 1)?
            };
            if best_edge.is_none() || v.better_for(best, mover) {
                best = v;
                best_edge = Some(e);
            }
            if best == ceiling {
                break;
            }
        }
        Ok((best, best_edge))
    }
}

/// Exact value of `(pattern, board)` from the empty board.
pub fn solve(pattern: &PatternGraph, board: &Board, limits: Limits) -> Result<(Outcome, SolveStats), SolveError> {
    let mut solver = Solver::new(Arc::new(pattern.clone()), Arc::new(board.clone()), limits)?;
    let outcome = solver.solve()?;
    Ok((outcome, solver.stats()))
}

/// Lowest-index move attaining the exact value of `position`.
pub fn best_move(pattern: &PatternGraph, position: &Position, limits: Limits) -> Result<usize, SolveError> {
    let mut solver = Solver::new(Arc::new(pattern.clone()), position.board_arc().clone(), limits)?;
    solver.best_move(position)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoardFamily {
    /// `K_n`.
    Complete,
    /// `K_{n,n}`.
    SquareBipartite,
}

impl BoardFamily {
    pub fn board(self, n: usize) -> Result<Board, ArenaError> {
        match self {
            BoardFamily::Complete => Board::complete(n),
            BoardFamily::SquareBipartite => Board::bipartite(n, n),
        }
    }
}

/// Smallest `n <= n_max` with a first-player win on the family's board of
/// size `n`. Scans upward from `n = 1`, so the value at `n - 1` is solved
/// (and is not a win) whenever the answer exceeds 1.
pub fn achievement_number(
    pattern: &PatternGraph,
    family: BoardFamily,
    n_max: usize,
    limits: Limits,
) -> Result<usize, SolveError> {
    for n in 1..=n_max {
        let board = family.board(n)?;
        if solve(pattern, &board, limits)?.0 == Outcome::FirstWin {
            return Ok(n);
        }
    }
    Err(SolveError::ExceedsBound { n_max })
}

/// Outcomes for each `n` in `sizes` (ascending), failing if a first-player
/// win is followed by a non-win on a larger board.
pub fn winnability_profile(
    pattern: &PatternGraph,
    family: BoardFamily,
    sizes: std::ops::RangeInclusive<usize>,
    limits: Limits,
) -> Result<Vec<(usize, Outcome)>, SolveError> {
    let mut out: Vec<(usize, Outcome)> = Vec::new();
    for n in sizes {
        let board = family.board(n)?;
        let (outcome, _) = solve(pattern, &board, limits)?;
        if let Some(&(won, _)) = out.iter().find(|(_, o)| *o == Outcome::FirstWin) {
            if outcome != Outcome::FirstWin {
                return Err(SolveError::MonotonicityViolation { won, lost: n });
            }
        }
        out.push((n, outcome));
    }
    Ok(out)
}

/// Table file name used under a cache directory.
pub fn cache_file_name(pattern: &PatternGraph, board: &Board) -> String {
    let safe: String = pattern
        .render()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{}__{}.rtt", safe, board.spec().replace(',', "x"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PatternGraph {
        parse_pattern(s).unwrap()
    }

    fn b(s: &str) -> Board {
        s.parse().unwrap()
    }

    #[test]
    fn tiny_games() {
        assert_eq!(solve(&p("K2"), &b("K2"), Limits::default()).unwrap().0, Outcome::FirstWin);
        assert_eq!(solve(&p("3K2"), &b("K5"), Limits::default()).unwrap().0, Outcome::Draw);
        assert_eq!(solve(&p("2K2"), &b("K4"), Limits::default()).unwrap().0, Outcome::Draw);
    }

    #[test]
    fn outcome_order() {
        assert!(Outcome::FirstWin > Outcome::Draw && Outcome::Draw > Outcome::SecondWin);
        assert!(Outcome::SecondWin.better_for(Outcome::Draw, Player::Second));
    }

    #[test]
    fn budget_overrun_is_unknown() {
        let err = solve(&p("3K2"), &b("K6"), Limits::nodes(3)).unwrap_err();
        assert!(matches!(err, SolveError::Unknown { budget: 3 }));
    }

    #[test]
    fn best_move_examples() {
        let pos = Position::new(Arc::new(b("K2")));
        assert_eq!(best_move(&p("K2"), &pos, Limits::default()).unwrap(), 0);
        let done = pos.apply_move(0).unwrap();
        assert!(matches!(best_move(&p("K2"), &done, Limits::default()), Err(SolveError::Terminal(_))));
    }

    #[test]
    fn cache_file_name_is_filesystem_safe() {
        assert_eq!(cache_file_name(&p("K1,3"), &b("K4,4")), "K1_3__K4x4.rtt");
    }
}
