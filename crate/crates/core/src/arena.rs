//! Boards, positions and the move/status rules of the alternating
//! achievement game.
//!
//! A board is `K_n` or `K_{n1,n2}`. Complete boards number their vertices
//! `0..n`; bipartite boards put the first part at `0..n1` and the second at
//! `n1..n1+n2`. Edges are indexed in a fixed order: pairs `(i, j)`, `i < j`,
//! lexicographically for `K_n`, and `(x_i, y_j)` row-major for `K_{n1,n2}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::pattern::{contains, contains_through_edge, HostGraph, PatternGraph, MAX_HOST_VERTICES};

/// Edge colorings are stored as `u128` masks.
pub const MAX_EDGES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArenaError {
    #[error("malformed board spec `{0}`")]
    MalformedBoard(String),
    #[error("board `{0}` is outside the supported range (at most {MAX_HOST_VERTICES} vertices and {MAX_EDGES} edges, parts at least 1)")]
    UnsupportedBoard(String),
    #[error("edge {0} does not exist on this board")]
    NoSuchEdge(usize),
    #[error("edge {0} is already colored")]
    AlreadyColored(usize),
    #[error("the game is already over ({0})")]
    GameOver(GameStatus),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoardKind {
    Complete(usize),
    Bipartite(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    kind: BoardKind,
    endpoints: Vec<(u8, u8)>,
    /// `edge_at[u * n + v]`, `u8::MAX` for non-edges.
    edge_at: Vec<u8>,
    /// Edges incident to each vertex.
    incident: Vec<u128>,
}

impl Board {
    pub fn complete(n: usize) -> Result<Self, ArenaError> {
        Self::new(BoardKind::Complete(n))
    }

    pub fn bipartite(n1: usize, n2: usize) -> Result<Self, ArenaError> {
        Self::new(BoardKind::Bipartite(n1, n2))
    }

    pub fn new(kind: BoardKind) -> Result<Self, ArenaError> {
        let (n, pairs): (usize, Vec<(usize, usize)>) = match kind {
            BoardKind::Complete(n) => {
                (n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect())
            }
            BoardKind::Bipartite(n1, n2) => {
                (n1 + n2, (0..n1).flat_map(|x| (0..n2).map(move |y| (x, n1 + y))).collect())
            }
        };
        let too_small = match kind {
            BoardKind::Complete(n) => n == 0,
            BoardKind::Bipartite(a, b) => a == 0 || b == 0,
        };
        if too_small || n > MAX_HOST_VERTICES || pairs.len() > MAX_EDGES {
            return Err(ArenaError::UnsupportedBoard(spec_string(kind)));
        }
        let mut edge_at = vec![u8::MAX; n * n];
        let mut incident = vec![0u128; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            edge_at[a * n + b] = i as u8;
            edge_at[b * n + a] = i as u8;
            incident[a] |= 1 << i;
            incident[b] |= 1 << i;
        }
        let endpoints = pairs.iter().map(|&(a, b)| (a as u8, b as u8)).collect();
        Ok(Self { kind, endpoints, edge_at, incident })
    }

    pub fn kind(&self) -> BoardKind {
        self.kind
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.kind, BoardKind::Bipartite(..))
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            BoardKind::Complete(n) => n,
            BoardKind::Bipartite(a, b) => a + b,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    /// Mask with one bit per edge.
    pub fn full_mask(&self) -> u128 {
        if self.edge_count() == MAX_EDGES {
            u128::MAX
        } else {
            (1u128 << self.edge_count()) - 1
        }
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (a, b) = self.endpoints[edge];
        (a as usize, b as usize)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return None;
        }
        match self.edge_at[u * n + v] {
            u8::MAX => None,
            e => Some(e as usize),
        }
    }

    /// Mask of edges incident to `v`.
    pub fn incident(&self, v: usize) -> u128 {
        self.incident[v]
    }

    /// Part of `v` on a bipartite board (0 for the first part), 0 on `K_n`.
    pub fn part_of(&self, v: usize) -> usize {
        match self.kind {
            BoardKind::Bipartite(n1, _) if v >= n1 => 1,
            _ => 0,
        }
    }

    /// Vertices of part 0 and part 1; on `K_n` the second list is empty.
    pub fn parts(&self) -> (Vec<usize>, Vec<usize>) {
        match self.kind {
            BoardKind::Complete(n) => ((0..n).collect(), Vec::new()),
            BoardKind::Bipartite(n1, n2) => ((0..n1).collect(), (n1..n1 + n2).collect()),
        }
    }

    /// Host graph formed by the edges in `mask`.
    pub fn host(&self, mask: u128) -> HostGraph {
        let mut host = HostGraph::new(self.vertex_count());
        let mut rest = mask;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (a, b) = self.endpoints(e);
            host.add_edge(a, b);
        }
        host
    }

    /// Human-readable vertex name: `v3` on `K_n`, `x1`/`y2` (1-based) on `K_{n1,n2}`.
    pub fn vertex_name(&self, v: usize) -> String {
        match self.kind {
            BoardKind::Complete(_) => format!("v{v}"),
            BoardKind::Bipartite(n1, _) if v < n1 => format!("x{}", v + 1),
            BoardKind::Bipartite(n1, _) => format!("y{}", v - n1 + 1),
        }
    }

    pub fn spec(&self) -> String {
        spec_string(self.kind)
    }
}

fn spec_string(kind: BoardKind) -> String {
    match kind {
        BoardKind::Complete(n) => format!("K{n}"),
        BoardKind::Bipartite(a, b) => format!("K{a},{b}"),
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl FromStr for Board {
    type Err = ArenaError;

    /// `K<n>` or `K<n1>,<n2>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArenaError::MalformedBoard(s.to_string());
        let t = s.trim();
        let body = t.strip_prefix('K').or_else(|| t.strip_prefix('k')).ok_or_else(bad)?;
        let num = |x: &str| -> Result<usize, ArenaError> {
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) || x.len() > 4 {
                return Err(bad());
            }
            x.parse().map_err(|_| bad())
        };
        match body.split_once(',') {
            Some((a, b)) => Board::bipartite(num(a)?, num(b)?),
            None => Board::complete(num(body)?),
        }
    }
}

pub fn parse_board(s: &str) -> Result<Board, ArenaError> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Uncolored,
    Blue,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn color(self) -> Color {
        match self {
            Player::First => Color::Blue,
            Player::Second => Color::Red,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }

    pub fn to_move(ply: usize) -> Player {
        if ply % 2 == 0 {
            Player::First
        } else {
            Player::Second
        }
    }

    pub fn letter(self) -> char {
        match self {
            Player::First => 'A',
            Player::Second => 'B',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameStatus {
    Ongoing,
    FirstWin,
    SecondWin,
    Draw,
}

impl GameStatus {
    pub fn is_terminal(self) -> bool {
        self != GameStatus::Ongoing
    }
}

impl fmt::Display for GameStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameStatus::Ongoing => "Ongoing",
            GameStatus::FirstWin => "FirstWin",
            GameStatus::SecondWin => "SecondWin",
            GameStatus::Draw => "Draw",
        })
    }
}

/// Bare coloring of a board: the hot-path value used by search code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coloring {
    pub blue: u128,
    pub red: u128,
}

impl Coloring {
    pub fn colored(&self) -> u128 {
        self.blue | self.red
    }

    pub fn ply(&self) -> usize {
        (self.blue.count_ones() + self.red.count_ones()) as usize
    }

    pub fn to_move(&self) -> Player {
        Player::to_move(self.ply())
    }

    pub fn color(&self, edge: usize) -> Color {
        if self.blue >> edge & 1 == 1 {
            Color::Blue
        } else if self.red >> edge & 1 == 1 {
            Color::Red
        } else {
            Color::Uncolored
        }
    }

    pub fn mask(&self, color: Color) -> u128 {
        match color {
            Color::Blue => self.blue,
            Color::Red => self.red,
            Color::Uncolored => !(self.blue | self.red),
        }
    }

    /// Colors `edge` for `player` without validation.
    pub fn with(self, edge: usize, player: Player) -> Coloring {
        let bit = 1u128 << edge;
        match player {
            Player::First => Coloring { blue: self.blue | bit, ..self },
            Player::Second => Coloring { red: self.red | bit, ..self },
        }
    }
}

/// A position: board plus coloring. Value semantics; moves return a new
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    board: Arc<Board>,
    coloring: Coloring,
}

impl Position {
    pub fn new(board: Arc<Board>) -> Self {
        Self { board, coloring: Coloring::default() }
    }

    pub fn from_coloring(board: Arc<Board>, coloring: Coloring) -> Self {
        debug_assert_eq!(coloring.blue & coloring.red, 0);
        Self { board, coloring }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn coloring(&self) -> Coloring {
        self.coloring
    }

    pub fn ply(&self) -> usize {
        self.coloring.ply()
    }

    pub fn to_move(&self) -> Player {
        self.coloring.to_move()
    }

    pub fn color(&self, edge: usize) -> Color {
        self.coloring.color(edge)
    }

    pub fn uncolored_mask(&self) -> u128 {
        self.board.full_mask() & !self.coloring.colored()
    }

    pub fn is_full(&self) -> bool {
        self.uncolored_mask() == 0
    }

    /// The uncolored edges in edge order.
    pub fn legal_moves(&self) -> Vec<usize> {
        bits(self.uncolored_mask()).collect()
    }

    /// Colors `edge` for the player to move.
    pub fn apply_move(&self, edge: usize) -> Result<Position, ArenaError> {
        if edge >= self.board.edge_count() {
            return Err(ArenaError::NoSuchEdge(edge));
        }
        if self.color(edge) != Color::Uncolored {
            return Err(ArenaError::AlreadyColored(edge));
        }
        Ok(Position { board: self.board.clone(), coloring: self.coloring.with(edge, self.to_move()) })
    }

    pub fn status(&self, pattern: &PatternGraph) -> GameStatus {
        status(&self.board, self.coloring, pattern)
    }

    /// Degree of `v` in the subgraph of the given color.
    pub fn degree(&self, v: usize, color: Color) -> usize {
        (self.board.incident(v) & self.coloring.mask(color) & self.board.full_mask()).count_ones() as usize
    }

    pub fn host(&self, color: Color) -> HostGraph {
        self.board.host(self.coloring.mask(color) & self.board.full_mask())
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Status of a coloring: blue completion wins for the first player, then red
/// for the second, then a full board is a draw.
pub fn status(board: &Board, coloring: Coloring, pattern: &PatternGraph) -> GameStatus {
    if contains(&board.host(coloring.blue), pattern) {
        GameStatus::FirstWin
    } else if contains(&board.host(coloring.red), pattern) {
        GameStatus::SecondWin
    } else if coloring.colored() & board.full_mask() == board.full_mask() {
        GameStatus::Draw
    } else {
        GameStatus::Ongoing
    }
}

/// Whether coloring `edge` for `player` completes the pattern, assuming the
/// player's edges did not contain it before.
pub fn completes(board: &Board, coloring: Coloring, pattern: &PatternGraph, edge: usize, player: Player) -> bool {
    let mask = match player {
        Player::First => coloring.blue,
        Player::Second => coloring.red,
    } | (1u128 << edge);
    if (mask.count_ones() as usize) < pattern.edge_count() {
        return false;
    }
    let (u, v) = board.endpoints(edge);
    contains_through_edge(&board.host(mask), pattern, u, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveRecord {
    pub ply_index: usize,
    pub player: Player,
    pub edge: usize,
}

/// A game in progress: pattern, position, move history and status.
#[derive(Debug, Clone)]
pub struct Game {
    pattern: Arc<PatternGraph>,
    position: Position,
    history: Vec<MoveRecord>,
    status: GameStatus,
}

impl Game {
    pub fn new(pattern: Arc<PatternGraph>, board: Arc<Board>) -> Self {
        let position = Position::new(board);
        let status = position.status(&pattern);
        Self { pattern, position, history: Vec::new(), status }
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    pub fn position(&self) -> &Position {
        &self.position
    }

    pub fn history(&self) -> &[MoveRecord] {
        &self.history
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    /// Plays `edge` for the player to move and updates the status.
    pub fn play(&mut self, edge: usize) -> Result<GameStatus, ArenaError> {
        if self.status.is_terminal() {
            return Err(ArenaError::GameOver(self.status));
        }
        let player = self.position.to_move();
        let next = self.position.apply_move(edge)?;
        self.history.push(MoveRecord { ply_index: self.position.ply(), player, edge });
        self.position = next;
        self.status = self.position.status(&self.pattern);
        Ok(self.status)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn pos(spec: &str) -> Position {
        Position::new(Arc::new(spec.parse().unwrap()))
    }

    #[test]
    fn board_specs() {
        let k6: Board = "K6".parse().unwrap();
        assert_eq!(k6.edge_count(), 15);
        assert_eq!(k6.endpoints(0), (0, 1));
        assert_eq!(k6.endpoints(5), (1, 2));
        let k45: Board = "K4,5".parse().unwrap();
        assert_eq!(k45.edge_count(), 20);
        assert_eq!(k45.endpoints(0), (0, 4));
        assert_eq!(k45.endpoints(6), (1, 5));
        assert_eq!(k45.edge_between(5, 1), Some(6));
        assert_eq!(k45.edge_between(0, 1), None);
        assert_eq!(k45.vertex_name(5), "y2");
        assert_eq!(k45.to_string(), "K4,5");
        for bad in ["", "K", "L4", "K0", "K3,0", "K4,", "K-1", "K40"] {
            assert!(bad.parse::<Board>().is_err(), "{bad}");
        }
    }

    #[test]
    fn legal_moves_examples() {
        assert_eq!(pos("K4").legal_moves().len(), 6);
        let mut p = pos("K2");
        p = p.apply_move(0).unwrap();
        assert!(p.legal_moves().is_empty());
        let p = pos("K2,2").apply_move(1).unwrap();
        assert_eq!(p.legal_moves(), vec![0, 2, 3]);
    }

    #[test]
    fn apply_move_parity_and_errors() {
        let p0 = pos("K3");
        let p1 = p0.apply_move(0).unwrap();
        assert_eq!(p1.color(0), Color::Blue);
        assert_eq!(p1.ply(), 1);
        assert_eq!(p0.ply(), 0);
        let p2 = p1.apply_move(2).unwrap();
        assert_eq!(p2.color(2), Color::Red);
        assert_eq!(p1.apply_move(0), Err(ArenaError::AlreadyColored(0)));
        assert_eq!(p1.apply_move(3), Err(ArenaError::NoSuchEdge(3)));
    }

    #[test]
    fn status_examples() {
        let k2 = parse_pattern("K2").unwrap();
        assert_eq!(pos("K2").apply_move(0).unwrap().status(&k2), GameStatus::FirstWin);
        let m2 = parse_pattern("2K2").unwrap();
        assert_eq!(pos("K5").status(&m2), GameStatus::Ongoing);
        // Blue triangle on {0,1,2}, red star at 3: neither holds two disjoint edges.
        let board: Arc<Board> = Arc::new("K4".parse().unwrap());
        let tri = [(0, 1), (0, 2), (1, 2)];
        let blue = tri.iter().fold(0u128, |m, &(a, b)| m | 1 << board.edge_between(a, b).unwrap());
        let full = Position::from_coloring(board.clone(), Coloring { blue, red: board.full_mask() & !blue });
        assert_eq!(full.status(&m2), GameStatus::Draw);
    }

    #[test]
    fn game_rejects_moves_after_the_end() {
        let mut game = Game::new(Arc::new(parse_pattern("K2").unwrap()), Arc::new("K3".parse().unwrap()));
        assert_eq!(game.play(0), Ok(GameStatus::FirstWin));
        assert_eq!(game.play(1), Err(ArenaError::GameOver(GameStatus::FirstWin)));
        assert_eq!(game.history().len(), 1);
        assert_eq!(game.history()[0].player, Player::First);
    }
}
