//! Explicit strategies from the literature, as deterministic move functions.
//!
//! Every strategy is driven by [`strategy_move`] from the current position
//! and a [`StrategyMemory`] that is a pure function of the move history. The
//! memory remembers the coloring after the strategy's own last move, which
//! lets the strategy recover the opponent's reply, plus a little scratch
//! (phase counters, named vertices of a proof's case analysis).
//!
//! Ties in "as large as possible" rules are always broken the same way:
//! maximize the criterion (pairs of degrees are compared sorted
//! descending, lexicographically), then take the lowest edge index.
//!
//! First-player strategies share a tactical prelude: complete the pattern
//! if possible, otherwise block an immediate completion by the opponent.
//! Star strategies additionally "keep choosing edges at v" whenever a vertex
//! is guaranteed to reach the required blue degree that way.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arena::{bits, completes, Board, BoardKind, Coloring, Player, Position};
use crate::pattern::{Family, PatternGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyId {
    AliceMatchingComplete,
    BobStarBlockComplete,
    AliceMatchingSquare,
    AliceDstarSquare,
    BobDstarPair,
    AliceDstarRect,
    BobDegreeMirror,
    AliceStar4_55,
    BobStar4_44,
    AliceStar2m3,
    BobStarMm,
    AliceStarRect,
    BobStarRect,
    AliceStarUnion,
}

impl StrategyId {
    pub const ALL: [StrategyId; 14] = [
        StrategyId::AliceMatchingComplete,
        StrategyId::BobStarBlockComplete,
        StrategyId::AliceMatchingSquare,
        StrategyId::AliceDstarSquare,
        StrategyId::BobDstarPair,
        StrategyId::AliceDstarRect,
        StrategyId::BobDegreeMirror,
        StrategyId::AliceStar4_55,
        StrategyId::BobStar4_44,
        StrategyId::AliceStar2m3,
        StrategyId::BobStarMm,
        StrategyId::AliceStarRect,
        StrategyId::BobStarRect,
        StrategyId::AliceStarUnion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyId::AliceMatchingComplete => "ALICE_MATCHING_COMPLETE",
            StrategyId::BobStarBlockComplete => "BOB_STAR_BLOCK_COMPLETE",
            StrategyId::AliceMatchingSquare => "ALICE_MATCHING_SQUARE",
            StrategyId::AliceDstarSquare => "ALICE_DSTAR_SQUARE",
            StrategyId::BobDstarPair => "BOB_DSTAR_PAIR",
            StrategyId::AliceDstarRect => "ALICE_DSTAR_RECT",
            StrategyId::BobDegreeMirror => "BOB_DEGREE_MIRROR",
            StrategyId::AliceStar4_55 => "ALICE_STAR4_55",
            StrategyId::BobStar4_44 => "BOB_STAR4_44",
            StrategyId::AliceStar2m3 => "ALICE_STAR_2M3",
            StrategyId::BobStarMm => "BOB_STAR_MM",
            StrategyId::AliceStarRect => "ALICE_STAR_RECT",
            StrategyId::BobStarRect => "BOB_STAR_RECT",
            StrategyId::AliceStarUnion => "ALICE_STAR_UNION",
        }
    }

    pub fn role(self) -> Player {
        if self.name().starts_with("ALICE") {
            Player::First
        } else {
            Player::Second
        }
    }

    /// Strategies whose move depends only on the current coloring and the
    /// opponent's last move.
    pub fn history_oblivious(self) -> bool {
        matches!(self, StrategyId::BobDegreeMirror | StrategyId::BobDstarPair | StrategyId::BobStarRect)
    }

    /// Whether verification should assert the "at most one blue-only vertex,
    /// and it is a blue leaf" invariant after every reply.
    pub fn keeps_leaf_invariant(self) -> bool {
        matches!(self, StrategyId::BobStarMm | StrategyId::BobStarBlockComplete)
    }

    /// Human-readable description of the supported (pattern, board) pairs.
    pub fn domain_text(self) -> &'static str {
        match self {
            StrategyId::AliceMatchingComplete => "mK2 on K2m, m >= 3",
            StrategyId::BobStarBlockComplete => "K1,n on K(n+1), n >= 3",
            StrategyId::AliceMatchingSquare => "mK2 on Km,m, m >= 5",
            StrategyId::AliceDstarSquare => "Sn,n on K(2n+1),(2n+1); Sm,n (m < n) on K2n,2n",
            StrategyId::BobDstarPair => "Sn,n on K2n,2n",
            StrategyId::AliceDstarRect => "Sm,n (m <= n) on K(2n+1),(2m+1)",
            StrategyId::BobDegreeMirror => {
                "Sn,n on Kn1,n2 with min(n1,n2) <= 2n; Sm,n (m < n) on Kn,(2m+1) or K2n,(2m+1)"
            }
            StrategyId::AliceStar4_55 => "K1,4 on K5,5",
            StrategyId::BobStar4_44 => "K1,4 on K4,4",
            StrategyId::AliceStar2m3 => "K1,m on K(2m-3),(2m-3), m >= 4",
            StrategyId::BobStarMm => "K1,m on Km,m, m >= 3",
            StrategyId::AliceStarRect => {
                "K1,m on Kn1,n2 (n1 >= n2) with n1 >= 2m-1, or n1 = 2m-2 and n2 >= m, or n1 = n2 = 2m-3 (m >= 4)"
            }
            StrategyId::BobStarRect => "K1,m on Kn1,n2 with n2 <= n1 <= 2m-2 and n2 <= m-1",
            StrategyId::AliceStarUnion => "K1,m+nK2 on K(m+n),(m+n) with m >= 2, n >= 1 and (m <= 4 or n >= m-2)",
        }
    }

    /// Checks that `(pattern, board)` lies in the strategy's declared domain.
    pub fn check_domain(self, pattern: &PatternGraph, board: &Board) -> Result<(), StrategyError> {
        if domain_ok(self, pattern, board) {
            Ok(())
        } else {
            Err(StrategyError::Domain {
                id: self,
                pattern: pattern.render(),
                board: board.spec(),
                domain: self.domain_text(),
            })
        }
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyId {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| StrategyError::UnknownId(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("unknown strategy `{0}`")]
    UnknownId(String),
    #[error("{id} does not apply to {pattern} on {board} (supports {domain})")]
    Domain { id: StrategyId, pattern: String, board: String, domain: &'static str },
    #[error("{0} was asked to move on the opponent's turn")]
    NotOurTurn(StrategyId),
    #[error("{id} reached a position it cannot handle: {reason}")]
    Unreachable { id: StrategyId, reason: String },
}

fn domain_ok(id: StrategyId, pattern: &PatternGraph, board: &Board) -> bool {
    let fam = pattern.family();
    let (n1, n2) = match board.kind() {
        BoardKind::Bipartite(a, b) => (a, b),
        BoardKind::Complete(n) => {
            return match (id, fam) {
                (StrategyId::AliceMatchingComplete, Family::Matching(m)) => m >= 3 && n == 2 * m,
                (StrategyId::BobStarBlockComplete, Family::Star(k)) => k >= 3 && n == k + 1,
                _ => false,
            };
        }
    };
    match (id, fam) {
        (StrategyId::AliceMatchingSquare, Family::Matching(m)) => m >= 5 && (n1, n2) == (m, m),
        (StrategyId::AliceDstarSquare, Family::DoubleStar(a, b)) => {
            let (s, l) = (a.min(b), a.max(b));
            if s == l {
                (n1, n2) == (2 * l + 1, 2 * l + 1)
            } else {
                (n1, n2) == (2 * l, 2 * l)
            }
        }
        (StrategyId::BobDstarPair, Family::DoubleStar(a, b)) => a == b && (n1, n2) == (2 * a, 2 * a),
        (StrategyId::AliceDstarRect, Family::DoubleStar(a, b)) => {
            let (s, l) = (a.min(b), a.max(b));
            (n1, n2) == (2 * l + 1, 2 * s + 1)
        }
        (StrategyId::BobDegreeMirror, Family::DoubleStar(..)) => mirror_side(pattern, board).is_some(),
        (StrategyId::AliceStar4_55, Family::Star(4)) => (n1, n2) == (5, 5),
        (StrategyId::BobStar4_44, Family::Star(4)) => (n1, n2) == (4, 4),
        (StrategyId::AliceStar2m3, Family::Star(m)) => m >= 4 && (n1, n2) == (2 * m - 3, 2 * m - 3),
        (StrategyId::BobStarMm, Family::Star(m)) => m >= 3 && (n1, n2) == (m, m),
        (StrategyId::AliceStarRect, Family::Star(m)) => {
            m >= 2
                && n1 >= n2
                && (n1 >= 2 * m - 1 || (n1 == 2 * m - 2 && n2 >= m) || (m >= 4 && n1 == 2 * m - 3 && n2 == n1))
        }
        (StrategyId::BobStarRect, Family::Star(m)) => m >= 2 && n1 >= n2 && n2 < m && n1 <= 2 * m - 2,
        (StrategyId::AliceStarUnion, Family::StarUnionMatching(m, n)) => {
            m >= 2 && n >= 1 && (m <= 4 || n + 2 >= m) && (n1, n2) == (m + n, m + n)
        }
        _ => false,
    }
}

/// Which part's endpoint the degree mirror answers at, by board shape.
fn mirror_side(pattern: &PatternGraph, board: &Board) -> Option<usize> {
    let (Family::DoubleStar(a, b), BoardKind::Bipartite(n1, n2)) = (pattern.family(), board.kind()) else {
        return None;
    };
    let (s, l) = (a.min(b), a.max(b));
    if s == l {
        // Answer at the endpoint whose degree is the smaller part size.
        (n1.min(n2) <= 2 * l).then_some(if n1 >= n2 { 0 } else { 1 })
    } else if (n1, n2) == (l, 2 * s + 1) {
        Some(0)
    } else if (n1, n2) == (2 * l, 2 * s + 1) {
        Some(1)
    } else {
        None
    }
}

const UNSET: u8 = u8::MAX;
const OFF_SCRIPT: u8 = u8::MAX;

/// Per-game scratch of a strategy; a function of the move history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyMemory {
    known: Coloring,
    phase: u8,
    swap: bool,
    slots: [u8; 10],
}

impl Default for StrategyMemory {
    fn default() -> Self {
        Self { known: Coloring::default(), phase: 0, swap: false, slots: [UNSET; 10] }
    }
}

impl StrategyMemory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Coloring right after the strategy's last move.
    pub fn known(&self) -> Coloring {
        self.known
    }
}

/// Next move of `id` in `position`, checking the strategy's domain first.
pub fn strategy_move(
    id: StrategyId,
    pattern: &PatternGraph,
    position: &Position,
    memory: &StrategyMemory,
) -> Result<(usize, StrategyMemory), StrategyError> {
    id.check_domain(pattern, position.board())?;
    strategy_move_unchecked(id, pattern, position, memory)
}

/// Like [`strategy_move`] but without the domain check, for deliberately
/// misapplied strategies (negative controls).
pub fn strategy_move_unchecked(
    id: StrategyId,
    pattern: &PatternGraph,
    position: &Position,
    memory: &StrategyMemory,
) -> Result<(usize, StrategyMemory), StrategyError> {
    let coloring = position.coloring();
    if coloring.to_move() != id.role() {
        return Err(StrategyError::NotOurTurn(id));
    }
    let unreachable = |reason: &str| StrategyError::Unreachable { id, reason: reason.to_string() };
    let known = memory.known;
    if known.blue & !coloring.blue != 0 || known.red & !coloring.red != 0 {
        return Err(unreachable("position does not extend the remembered coloring"));
    }
    let (own_new, opp_new) = match id.role() {
        Player::First => (coloring.blue & !known.blue, coloring.red & !known.red),
        Player::Second => (coloring.red & !known.red, coloring.blue & !known.blue),
    };
    let expected_opp = if id.role() == Player::First && coloring.ply() == 0 { 0 } else { 1 };
    if own_new != 0 || opp_new.count_ones() != expected_opp {
        return Err(unreachable("more than the opponent's single reply happened since the last move"));
    }
    if position.is_full() {
        return Err(unreachable("no uncolored edge left"));
    }
    let mut ctx = Ctx {
        id,
        view: View { board: position.board(), pattern, c: coloring },
        mem: *memory,
        last: bits(opp_new).next(),
    };
    let edge = ctx.choose()?;
    debug_assert!(ctx.view.is_open(edge));
    ctx.mem.known = coloring.with(edge, id.role());
    Ok((edge, ctx.mem))
}

/// A strategy bound to one game, for interactive drivers.
#[derive(Debug, Clone)]
pub struct StrategyPlayer {
    pub id: StrategyId,
    memory: StrategyMemory,
}

impl StrategyPlayer {
    pub fn new(id: StrategyId) -> Self {
        Self { id, memory: StrategyMemory::new() }
    }

    pub fn next_move(&mut self, pattern: &PatternGraph, position: &Position) -> Result<usize, StrategyError> {
        let (edge, memory) = strategy_move(self.id, pattern, position, &self.memory)?;
        self.memory = memory;
        Ok(edge)
    }
}

/// Read-only helpers over a coloring.
struct View<'a> {
    board: &'a Board,
    pattern: &'a PatternGraph,
    c: Coloring,
}

impl View<'_> {
    fn open(&self) -> u128 {
        self.board.full_mask() & !self.c.colored()
    }

    fn is_open(&self, e: usize) -> bool {
        self.open() >> e & 1 == 1
    }

    fn blue(&self, v: usize) -> usize {
        (self.board.incident(v) & self.c.blue).count_ones() as usize
    }

    fn red(&self, v: usize) -> usize {
        (self.board.incident(v) & self.c.red).count_ones() as usize
    }

    fn open_at(&self, v: usize) -> u128 {
        self.board.incident(v) & self.open()
    }

    fn open_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.board.edge_between(u, v).filter(|&e| self.is_open(e))
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.board.endpoints(e);
        if a == v {
            b
        } else {
            a
        }
    }

    /// Vertices touched by edges in `mask`, as a bit set.
    fn touched(&self, mask: u128) -> u32 {
        bits(mask).fold(0, |acc, e| {
            let (a, b) = self.board.endpoints(e);
            acc | 1 << a | 1 << b
        })
    }

    fn vertices(&self) -> std::ops::Range<usize> {
        0..self.board.vertex_count()
    }

    fn part(&self, v: usize) -> usize {
        self.board.part_of(v)
    }

    fn win_now(&self, player: Player) -> Option<usize> {
        bits(self.open()).find(|&e| completes(self.board, self.c, self.pattern, e, player))
    }
}

/// Degree pair sorted descending, the comparison key for "both as large as
/// possible".
fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.max(b), a.min(b))
}

/// Candidate maximizing `key`; lowest index among ties.
fn argmax<K: Ord>(cands: impl Iterator<Item = usize>, key: impl Fn(usize) -> K) -> Option<usize> {
    let mut best: Option<(K, usize)> = None;
    for e in cands {
        let k = key(e);
        if best.as_ref().is_none_or(|(bk, _)| k > *bk) {
            best = Some((k, e));
        }
    }
    best.map(|(_, e)| e)
}

fn has(set: u32, v: usize) -> bool {
    set >> v & 1 == 1
}

struct Ctx<'a> {
    id: StrategyId,
    view: View<'a>,
    mem: StrategyMemory,
    /// Opponent's reply since our last move.
    last: Option<usize>,
}

impl Ctx<'_> {
    fn fail<T>(&self, reason: &str) -> Result<T, StrategyError> {
        Err(StrategyError::Unreachable { id: self.id, reason: reason.to_string() })
    }

    fn slot(&self, i: usize) -> usize {
        self.mem.slots[i] as usize
    }

    fn set_slot(&mut self, i: usize, v: usize) {
        self.mem.slots[i] = v as u8;
    }

    fn choose(&mut self) -> Result<usize, StrategyError> {
        match self.id {
            StrategyId::AliceMatchingComplete => self.matching_complete(),
            StrategyId::BobStarBlockComplete => self.star_block_complete(),
            StrategyId::AliceMatchingSquare => self.matching_square(),
            StrategyId::AliceDstarSquare | StrategyId::AliceDstarRect => self.double_star_builder(),
            StrategyId::BobDstarPair => self.mirror_reply(0),
            StrategyId::BobDegreeMirror => {
                let side = mirror_side(self.view.pattern, self.view.board).unwrap_or(0);
                self.mirror_reply(side)
            }
            StrategyId::BobStarRect => self.mirror_reply(1),
            StrategyId::AliceStar4_55 | StrategyId::AliceStar2m3 => self.star_script(),
            StrategyId::BobStar4_44 => self.star4_44(),
            StrategyId::BobStarMm => self.star_mm(),
            StrategyId::AliceStarRect => self.star_rect(),
            StrategyId::AliceStarUnion => self.star_union(),
        }
    }

    /// Win now, else block the opponent's immediate completion.
    fn prelude(&self) -> Option<usize> {
        self.view.win_now(Player::First).or_else(|| self.view.win_now(Player::Second))
    }

    /// For `K1,m`-containing targets: a vertex whose blue degree reaches `m`
    /// if Alice keeps choosing edges there. Prefers higher blue degree; the
    /// edge goes to the neighbour with most red (to spoil red stars), then
    /// most blue.
    fn star_push(&self, m: usize) -> Option<usize> {
        let v = &self.view;
        let center = argmax(
            v.vertices().filter(|&w| {
                let open = v.open_at(w).count_ones() as usize;
                open > 0 && v.blue(w) + open.div_ceil(2) >= m
            }),
            |w| v.blue(w),
        )?;
        argmax(bits(v.open_at(center)), |e| {
            let w = v.other(e, center);
            (v.red(w), v.blue(w))
        })
    }

    // ---- mK2 on K2m -----------------------------------------------------

    /// Slots: 0,1 = e_{m-2}; 2,3 = e_{m-1}; 4 = endpoint of f_{m-1} used
    /// by e_m; 5 = endpoint of e_{m-1} used by e_m.
    fn matching_complete(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.view.win_now(Player::First) {
            return Ok(e);
        }
        if let Some(e) = self.view.win_now(Player::Second) {
            self.mem.phase = OFF_SCRIPT;
            return Ok(e);
        }
        if self.mem.phase == OFF_SCRIPT {
            return self.fail("left the scripted line after a forced block");
        }
        let Family::Matching(m) = self.view.pattern.family() else {
            return self.fail("pattern is not a matching");
        };
        let v = &self.view;
        let round = v.c.blue.count_ones() as usize + 1;
        let covered = v.touched(v.c.blue);
        let red = |a: usize, b: usize| pair(v.red(a), v.red(b));
        let free_edges = || {
            bits(v.open()).filter(move |&e| {
                let (a, b) = v.board.endpoints(e);
                !has(covered, a) && !has(covered, b)
            })
        };
        if round + 2 <= m {
            let e = argmax(free_edges(), |e| {
                let (a, b) = v.board.endpoints(e);
                red(a, b)
            });
            let Some(e) = e else { return self.fail("no uncolored edge avoids the blue matching") };
            if round + 2 == m {
                let (a, b) = self.view.board.endpoints(e);
                self.set_slot(0, a);
                self.set_slot(1, b);
            }
            return Ok(e);
        }
        if round + 1 == m {
            // Four vertices remain; keep the complementary pair available.
            let rest: Vec<usize> = v.vertices().filter(|&w| !has(covered, w)).collect();
            let complement_open = |e: usize| {
                let (a, b) = v.board.endpoints(e);
                let others: Vec<usize> = rest.iter().copied().filter(|&w| w != a && w != b).collect();
                others.len() == 2 && v.open_edge(others[0], others[1]).is_some()
            };
            let smallest = |e: usize| {
                let (a, b) = v.board.endpoints(e);
                std::cmp::Reverse(red(a, b))
            };
            let e = argmax(free_edges().filter(|&e| complement_open(e)), smallest)
                .or_else(|| argmax(free_edges(), smallest));
            let Some(e) = e else { return self.fail("no uncolored edge among the last four vertices") };
            let (a, b) = self.view.board.endpoints(e);
            self.set_slot(2, a);
            self.set_slot(3, b);
            return Ok(e);
        }
        if round == m {
            // The last free pair {p, q} is red: bridge it to e_{m-1} = cd so
            // that {q, d'} becomes a threat. Among the bridges, keep those for
            // which the follow-up double threat exists and red gains no
            // immediate win; then prefer large red degrees.
            let (c, d) = (self.slot(2), self.slot(3));
            let (a0, b0) = (self.slot(0), self.slot(1));
            let rest: Vec<usize> = v.vertices().filter(|&w| !has(covered, w)).collect();
            if rest.len() != 2 {
                return self.fail("blue edges are not a matching");
            }
            let mut best: Option<(bool, (usize, usize), std::cmp::Reverse<usize>, usize, usize)> = None;
            for &p in &rest {
                let q = if p == rest[0] { rest[1] } else { rest[0] };
                for (cc, dd) in [(c, d), (d, c)] {
                    let (Some(e), Some(t)) = (v.open_edge(p, cc), v.open_edge(q, dd)) else { continue };
                    let after = v.c.with(e, Player::First).with(t, Player::Second);
                    let sound = reroute(v, after, &pivots(v, (a0, b0), &[c, d]), q, p, dd).is_some();
                    let key = (sound, red(p, cc), std::cmp::Reverse(e), p, cc);
                    if best.as_ref().is_none_or(|b| key > *b) {
                        best = Some(key);
                    }
                }
            }
            let Some((_, _, std::cmp::Reverse(e), p, cc)) = best else {
                return self.fail("no bridging edge keeps a threat");
            };
            self.set_slot(4, p);
            self.set_slot(5, cc);
            return Ok(e);
        }
        if round == m + 1 {
            // Threat {q, d'} was blocked. Re-route through e_{m-2} = ab (or
            // another earlier matching edge if that one is spoiled).
            let (a0, b0) = (self.slot(0), self.slot(1));
            let (c, d) = (self.slot(2), self.slot(3));
            let (p, cc) = (self.slot(4), self.slot(5));
            let dd = if cc == c { d } else { c };
            // Every vertex but q is covered after e_m.
            let Some(q) = v.vertices().find(|&w| !has(covered, w)) else {
                return self.fail("cannot locate the second red vertex");
            };
            let fallback = [a0, b0].into_iter().find_map(|a| v.open_edge(q, a));
            let pivots = pivots(v, (a0, b0), &[c, d, p]);
            return match reroute(v, v.c, &pivots, q, p, dd).or(fallback) {
                Some(e) => Ok(e),
                None => self.fail("both re-routing edges are colored"),
            };
        }
        self.fail("double threat was answered without a win")
    }

    // ---- K1,n on K(n+1) blocker -----------------------------------------

    fn star_block_complete(&mut self) -> Result<usize, StrategyError> {
        let v = &self.view;
        let untouched: Vec<usize> = {
            let red = v.touched(v.c.red);
            v.vertices().filter(|&w| !has(red, w)).collect()
        };
        let in_u = |w: usize| untouched.contains(&w);
        let blue_pair = |e: usize| {
            let (a, b) = v.board.endpoints(e);
            pair(v.blue(a), v.blue(b))
        };
        let e = if untouched.len() >= 3 {
            argmax(
                bits(v.open()).filter(|&e| {
                    let (a, b) = v.board.endpoints(e);
                    in_u(a) && in_u(b)
                }),
                blue_pair,
            )
        } else if !untouched.is_empty() {
            argmax(
                bits(v.open()).filter(|&e| {
                    let (a, b) = v.board.endpoints(e);
                    in_u(a) || in_u(b)
                }),
                |e| {
                    let (a, b) = v.board.endpoints(e);
                    let inner = [a, b].into_iter().filter(|&w| in_u(w)).map(|w| v.blue(w)).max().unwrap_or(0);
                    (inner, blue_pair(e))
                },
            )
        } else {
            None
        };
        match e.or_else(|| argmax(bits(v.open()), blue_pair)) {
            Some(e) => Ok(e),
            None => self.fail("no uncolored edge"),
        }
    }

    // ---- mK2 on Km,m ----------------------------------------------------

    /// Phase 1 = the dispatch chose the "f_{m-2} inside" branch, 2 = other.
    /// Slots: 0 = a, 1 = b, 2 = c, 3 = d, 4 = w, 5 = x.
    fn matching_square(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.view.win_now(Player::First) {
            return Ok(e);
        }
        if let Some(e) = self.view.win_now(Player::Second) {
            self.mem.phase = OFF_SCRIPT;
            return Ok(e);
        }
        if self.mem.phase == OFF_SCRIPT {
            return self.fail("left the scripted line after a forced block");
        }
        let Family::Matching(m) = self.view.pattern.family() else {
            return self.fail("pattern is not a matching");
        };
        let v = &self.view;
        let round = v.c.blue.count_ones() as usize + 1;
        let covered = v.touched(v.c.blue);
        let free_edges = || {
            bits(v.open()).filter(move |&e| {
                let (a, b) = v.board.endpoints(e);
                !has(covered, a) && !has(covered, b)
            })
        };
        if round + 2 <= m {
            let e = argmax(free_edges(), |e| {
                let (a, b) = v.board.endpoints(e);
                pair(v.red(a), v.red(b))
            });
            return match e {
                Some(e) => Ok(e),
                None => self.fail("no uncolored edge avoids the blue matching"),
            };
        }
        if round + 1 == m {
            let rest: Vec<usize> = v.vertices().filter(|&w| !has(covered, w)).collect();
            let complement_open = |e: usize| {
                let (a, b) = v.board.endpoints(e);
                let others: Vec<usize> = rest.iter().copied().filter(|&w| w != a && w != b).collect();
                others.len() == 2 && v.open_edge(others[0], others[1]).is_some()
            };
            let inside = self.last.is_some_and(|f| {
                let (a, b) = v.board.endpoints(f);
                !has(covered, a) && !has(covered, b)
            });
            let last_ends = self.last.map(|f| v.board.endpoints(f));
            let alg_rule = |e: usize| {
                let (a, b) = v.board.endpoints(e);
                if inside {
                    let (p, q) = last_ends.unwrap_or((usize::MAX, usize::MAX));
                    let hits = |w: usize| w == p || w == q;
                    (hits(a) && v.red(b) == 0) || (hits(b) && v.red(a) == 0)
                } else {
                    v.red(a) == 0 && v.red(b) == 0
                }
            };
            let lowest = |e: usize| std::cmp::Reverse(e);
            let e = argmax(free_edges().filter(|&e| alg_rule(e) && complement_open(e)), lowest)
                .or_else(|| argmax(free_edges().filter(|&e| complement_open(e)), lowest))
                .or_else(|| argmax(free_edges(), lowest));
            self.mem.phase = if inside { 1 } else { 2 };
            let Some(e) = e else { return self.fail("no uncolored edge among the last four vertices") };
            let (a, b) = self.view.board.endpoints(e);
            // Remember e_{m-1} in slots 6, 7.
            self.set_slot(6, a);
            self.set_slot(7, b);
            return Ok(e);
        }
        if round == m {
            // Leftover pair wx is blocked; swap through two blue edges.
            let rest: Vec<usize> = v.vertices().filter(|&w| !has(covered, w)).collect();
            if rest.len() != 2 {
                return self.fail("blue edges are not a matching");
            }
            let (w, x) = if v.part(rest[0]) == 0 { (rest[0], rest[1]) } else { (rest[1], rest[0]) };
            let last_blue = v.board.edge_between(self.slot(6), self.slot(7));
            let blue: Vec<(usize, usize, usize)> = bits(v.c.blue)
                .map(|e| {
                    let (a, b) = v.board.endpoints(e);
                    if v.part(a) == 0 {
                        (e, a, b)
                    } else {
                        (e, b, a)
                    }
                })
                .collect();
            let works = |&(_, a, b): &(usize, usize, usize), &(_, c, d): &(usize, usize, usize)| {
                [(b, w), (a, x), (c, x), (a, d), (w, d)].iter().all(|&(s, t)| v.open_edge(s, t).is_some())
            };
            let restricted = |p: &(usize, usize, usize), q: &(usize, usize, usize)| {
                if self.mem.phase == 1 {
                    Some(p.0) != last_blue && Some(q.0) != last_blue
                } else {
                    Some(q.0) == last_blue
                }
            };
            // Sound: after bw and the forced reply ax, and again after cx,
            // red has no immediate win.
            let red_wins = |c: Coloring| {
                bits(v.board.full_mask() & !c.colored()).any(|f| completes(v.board, c, v.pattern, f, Player::Second))
            };
            let sound = |&(_, a, b): &(usize, usize, usize), &(_, c, _): &(usize, usize, usize)| {
                let edge = |s, t| v.board.edge_between(s, t).expect("bipartite edge");
                let after = v.c.with(edge(b, w), Player::First).with(edge(a, x), Player::Second);
                !red_wins(after) && !red_wins(after.with(edge(c, x), Player::First))
            };
            let mut pick = None;
            for (need_sound, strict) in [(true, true), (true, false), (false, true), (false, false)] {
                pick = blue
                    .iter()
                    .flat_map(|p| blue.iter().map(move |q| (*p, *q)))
                    .filter(|(p, q)| p.0 != q.0 && works(p, q))
                    .find(|(p, q)| (!strict || restricted(p, q)) && (!need_sound || sound(p, q)));
                if pick.is_some() {
                    break;
                }
            }
            let Some(((_, a, b), (_, c, d))) = pick else {
                return self.fail("no pair of blue edges supports the swap");
            };
            let e = v.board.edge_between(b, w).expect("bipartite edge");
            for (i, z) in [a, b, c, d, w, x].into_iter().enumerate() {
                self.set_slot(i, z);
            }
            return Ok(e);
        }
        if round == m + 1 {
            let (c, x) = (self.slot(2), self.slot(5));
            return match self.view.open_edge(c, x) {
                Some(e) => Ok(e),
                None => self.fail("swap edge cx is colored"),
            };
        }
        self.fail("double threat was answered without a win")
    }

    // ---- double stars ---------------------------------------------------

    /// Slot 0 = first center, slot 1 = second center.
    fn double_star_builder(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.prelude() {
            return Ok(e);
        }
        let Family::DoubleStar(a, b) = self.view.pattern.family() else {
            return self.fail("pattern is not a double star");
        };
        let (small, large) = (a.min(b), a.max(b));
        let BoardKind::Bipartite(n1, _) = self.view.board.kind() else {
            return self.fail("board is not bipartite");
        };
        let rect = self.id == StrategyId::AliceDstarRect;
        let v = &self.view;
        if v.c.ply() == 0 {
            return Ok(0);
        }
        if self.mem.slots[0] == UNSET {
            // Center on x1, unless Bob's first reply touched it (square board,
            // unequal arms).
            let (x1, y1) = (0, n1);
            let f1_at_x1 = self.last.is_some_and(|f| v.board.endpoints(f).0 == x1);
            let center = if !rect && small < large && f1_at_x1 { y1 } else { x1 };
            self.set_slot(0, center);
        }
        let center = self.slot(0);
        let first_arm = if rect { small + 1 } else { large + 1 };
        let v = &self.view;
        if self.mem.slots[1] == UNSET && v.blue(center) < first_arm {
            return match bits(v.open_at(center)).next() {
                Some(e) => Ok(e),
                None => self.fail("first center is saturated"),
            };
        }
        if self.mem.slots[1] == UNSET {
            let second = bits(v.board.incident(center) & v.c.blue)
                .map(|e| v.other(e, center))
                .filter(|&y| v.red(y) <= 1)
                .min();
            let Some(second) = second else { return self.fail("every blue neighbour has two red edges") };
            self.set_slot(1, second);
        }
        let second = self.slot(1);
        match bits(self.view.open_at(second)).next() {
            Some(e) => Ok(e),
            None => self.fail("second center is saturated"),
        }
    }

    /// Answer Alice's last edge at its endpoint in `side`.
    fn mirror_reply(&mut self, side: usize) -> Result<usize, StrategyError> {
        let v = &self.view;
        let Some(last) = self.last else { return self.fail("no move to answer") };
        let (a, b) = v.board.endpoints(last);
        let anchor = if v.part(a) == side { a } else { b };
        match bits(v.open_at(anchor)).next().or_else(|| bits(v.open()).next()) {
            Some(e) => Ok(e),
            None => self.fail("no uncolored edge"),
        }
    }

    // ---- stars on square boards -------------------------------------------

    /// Frame-relabelled forcing line for `K1,m` on `K(2m-3),(2m-3)`.
    ///
    /// Slots 0..5 hold frame vertices x1..x5, slots 5..10 hold y1..y5; with
    /// `swap` the frame's X side is the board's second part.
    fn star_script(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.prelude() {
            return Ok(e);
        }
        let Family::Star(m) = self.view.pattern.family() else {
            return self.fail("pattern is not a star");
        };
        if let Some(e) = self.star_push(m) {
            self.mem.phase = OFF_SCRIPT;
            return Ok(e);
        }
        if self.mem.phase == OFF_SCRIPT {
            return self.fail("no forcing continuation after leaving the script");
        }
        self.star_script_step()
    }

    fn frame_x(&self, i: usize) -> usize {
        self.slot(i - 1)
    }

    fn frame_y(&self, j: usize) -> usize {
        self.slot(4 + j)
    }

    fn frame_edge(&self, i: usize, j: usize) -> Option<usize> {
        self.view.board.edge_between(self.frame_x(i), self.frame_y(j))
    }

    /// Lowest board vertex on the frame's `side` (0 = X) not yet labelled and
    /// joined to `to` by an uncolored edge.
    fn fresh(&self, side: usize, to: usize) -> Option<usize> {
        let board_side = side ^ self.mem.swap as usize;
        self.view
            .vertices()
            .filter(|&w| self.view.part(w) == board_side)
            .filter(|&w| !self.mem.slots.contains(&(w as u8)))
            .find(|&w| self.view.open_edge(w, to).is_some())
    }

    fn star_script_step(&mut self) -> Result<usize, StrategyError> {
        let v = &self.view;
        let BoardKind::Bipartite(n1, _) = v.board.kind() else {
            return self.fail("board is not bipartite");
        };
        let last = self.last.map(|f| v.board.endpoints(f));
        let phase = self.mem.phase;
        let step = match phase {
            0 => {
                self.mem.phase = 1;
                return Ok(0);
            }
            1 => {
                let (p, q) = last.expect("reply after the first move");
                let (x1, y1) = (0, n1);
                if p == x1 {
                    self.mem.swap = false;
                    self.mem.slots[0] = x1 as u8;
                    self.mem.slots[5] = y1 as u8;
                    self.mem.slots[6] = q as u8;
                } else if q == y1 {
                    self.mem.swap = true;
                    self.mem.slots[0] = y1 as u8;
                    self.mem.slots[5] = x1 as u8;
                    self.mem.slots[6] = p as u8;
                } else {
                    // Disjoint reply: take x1 q; the position then matches the
                    // first case with the parts exchanged.
                    self.mem.swap = true;
                    self.mem.slots[0] = q as u8;
                    self.mem.slots[1] = y1 as u8;
                    self.mem.slots[5] = x1 as u8;
                    self.mem.slots[6] = p as u8;
                    self.mem.phase = 2;
                    return Ok(v.board.edge_between(x1, q).expect("bipartite edge"));
                }
                let Some(x2) = self.fresh(0, self.frame_y(1)) else { return self.fail("no fresh x2") };
                self.mem.slots[1] = x2 as u8;
                self.frame_edge(2, 1)
            }
            2 => {
                let y1 = self.frame_y(1);
                let (p, q) = last.expect("reply");
                let x3 = if p == y1 { q } else { p };
                self.mem.slots[2] = x3 as u8;
                let Some(x4) = self.fresh(0, y1) else { return self.fail("no fresh x4") };
                self.mem.slots[3] = x4 as u8;
                self.frame_edge(4, 1)
            }
            3 => {
                let y1 = self.frame_y(1);
                let (p, q) = last.expect("reply");
                let x5 = if p == y1 { q } else { p };
                self.mem.slots[4] = x5 as u8;
                self.frame_edge(2, 2)
            }
            4 => {
                let x2 = self.frame_x(2);
                let (p, q) = last.expect("reply");
                let y3 = if p == x2 { q } else { p };
                self.mem.slots[7] = y3 as u8;
                let Some(y4) = self.fresh(1, x2) else { return self.fail("no fresh y4") };
                self.mem.slots[8] = y4 as u8;
                self.frame_edge(2, 4)
            }
            5 => {
                let x2 = self.frame_x(2);
                let (p, q) = last.expect("reply");
                let y5 = if p == x2 { q } else { p };
                self.mem.slots[9] = y5 as u8;
                self.frame_edge(4, 4)
            }
            _ => None,
        };
        self.mem.phase = phase + 1;
        match step.filter(|&e| self.view.is_open(e)) {
            Some(e) => Ok(e),
            None => self.fail("scripted edge is unavailable"),
        }
    }

    fn star4_44(&mut self) -> Result<usize, StrategyError> {
        let v = &self.view;
        let Some(last) = self.last else { return self.fail("no move to answer") };
        let (x, y) = v.board.endpoints(last);
        let lowest_red_partner = |u: usize| argmax(bits(v.open_at(u)), |e| std::cmp::Reverse(v.red(v.other(e, u))));
        let e = match (v.red(x) == 0, v.red(y) == 0) {
            (true, true) => {
                let (u, w) = if v.blue(y) > v.blue(x) { (y, x) } else { (x, y) };
                lowest_red_partner(u).or_else(|| lowest_red_partner(w))
            }
            (true, false) => lowest_red_partner(x),
            (false, true) => lowest_red_partner(y),
            (false, false) => None,
        };
        let score = |w: usize| (v.blue(w), std::cmp::Reverse(v.red(w)));
        let e = e.or_else(|| {
            argmax(bits(v.open()), |e| {
                let (a, b) = v.board.endpoints(e);
                (score(a).max(score(b)), score(a).min(score(b)))
            })
        });
        match e {
            Some(e) => Ok(e),
            None => self.fail("no uncolored edge"),
        }
    }

    fn star_mm(&mut self) -> Result<usize, StrategyError> {
        let v = &self.view;
        let Some(last) = self.last else { return self.fail("no move to answer") };
        let (v1, v2) = v.board.endpoints(last);
        let red_set = v.touched(v.c.red);
        let before = v.touched(v.c.blue & !(1 << last));
        let exposed_before: Vec<usize> = v.vertices().filter(|&w| has(before, w) && !has(red_set, w)).collect();
        let exposed_after: Vec<usize> =
            v.vertices().filter(|&w| has(v.touched(v.c.blue), w) && !has(red_set, w)).collect();
        let at = |u: usize| argmax(bits(v.open_at(u)), |e| v.blue(v.other(e, u)));
        let e = match (exposed_before.len(), exposed_after.len()) {
            (0, 0) => argmax(bits(v.open()), |e| {
                let (a, b) = v.board.endpoints(e);
                pair(v.blue(a), v.blue(b))
            }),
            (0, 1) => at(exposed_after[0]),
            (0, 2) => {
                let first = if v.part(v1) == 0 { v1 } else { v2 };
                at(first).or_else(|| at(if first == v1 { v2 } else { v1 }))
            }
            (1, 1) | (1, 2) => at(exposed_before[0]),
            (1, 3) => {
                let v0 = exposed_before[0];
                let fresh = if v.part(v1) != v.part(v0) { v1 } else { v2 };
                v.open_edge(v0, fresh)
            }
            _ => return self.fail("more than one blue vertex is free of red"),
        };
        match e {
            Some(e) => Ok(e),
            None => self.fail("prescribed vertex has no uncolored edge"),
        }
    }

    /// Winners on `K_{n1,n2}` for `K1,m`.
    ///
    /// Slot 0 = current column in the forcing line.
    fn star_rect(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.prelude() {
            return Ok(e);
        }
        let Family::Star(m) = self.view.pattern.family() else {
            return self.fail("pattern is not a star");
        };
        let BoardKind::Bipartite(n1, n2) = self.view.board.kind() else {
            return self.fail("board is not bipartite");
        };
        if n1 == n2 && n1 == 2 * m - 3 && n1 < 2 * m - 1 {
            return self.star_script();
        }
        if let Some(e) = self.star_push(m) {
            return Ok(e);
        }
        let v = &self.view;
        let x1 = 0;
        if n1 >= 2 * m - 1 {
            return match bits(v.open_at(n1)).next() {
                Some(e) => Ok(e),
                None => self.fail("first column is saturated"),
            };
        }
        // Force column by column, each column opened from x1.
        let current = (self.mem.slots[0] != UNSET).then(|| self.slot(0)).filter(|&y| v.open_at(y) != 0);
        if let Some(y) = current {
            let e = argmax(bits(v.open_at(y)), |e| (v.red(v.other(e, y)), std::cmp::Reverse(e)));
            return Ok(e.expect("column has an open edge"));
        }
        let next = (n1..n1 + n2).find(|&y| v.open_edge(x1, y).is_some() && v.red(y) == 0);
        match next {
            Some(y) => {
                let e = v.board.edge_between(x1, y).expect("bipartite edge");
                self.set_slot(0, y);
                Ok(e)
            }
            None => self.fail("no fresh column to force"),
        }
    }

    /// Slot 0 = star center.
    fn star_union(&mut self) -> Result<usize, StrategyError> {
        if let Some(e) = self.prelude() {
            return Ok(e);
        }
        let Family::StarUnionMatching(m, _) = self.view.pattern.family() else {
            return self.fail("pattern is not a star plus matching");
        };
        let BoardKind::Bipartite(n1, _) = self.view.board.kind() else {
            return self.fail("board is not bipartite");
        };
        let v = &self.view;
        if m >= 3 {
            if v.c.ply() == 0 {
                return Ok(0);
            }
            if self.mem.slots[0] == UNSET {
                let f1_at_y1 = self.last.is_some_and(|f| v.board.endpoints(f).1 == n1);
                self.set_slot(0, if f1_at_y1 { 0 } else { n1 });
            }
            let center = self.slot(0);
            let v = &self.view;
            if v.blue(center) < m {
                // Absorb a red edge that touches no blue edge, if possible.
                let blue_set = v.touched(v.c.blue);
                let stray = |w: usize| {
                    bits(v.board.incident(w) & v.c.red).any(|f| {
                        let (a, b) = v.board.endpoints(f);
                        !has(blue_set, a) && !has(blue_set, b)
                    })
                };
                let e = argmax(bits(v.open_at(center)), |e| stray(v.other(e, center)));
                return match e {
                    Some(e) => Ok(e),
                    None => self.fail("star center is saturated"),
                };
            }
        }
        // Matching phase on vertices untouched by blue.
        let v = &self.view;
        let covered = v.touched(v.c.blue);
        let e = argmax(
            bits(v.open()).filter(|&e| {
                let (a, b) = v.board.endpoints(e);
                !has(covered, a) && !has(covered, b)
            }),
            |e| {
                let (a, b) = v.board.endpoints(e);
                pair(v.red(a), v.red(b))
            },
        );
        match e {
            Some(e) => Ok(e),
            None => self.fail("no edge avoids the blue graph"),
        }
    }
}

/// Alice's re-routing edge `q a` in coloring `c`, where `ab` runs over
/// `pivots` (earlier matching edges, e_{m-2} first), such that both
/// completions `b p` and `b d'` are open and red has no immediate win
/// afterwards.
fn reroute(v: &View, c: Coloring, pivots: &[(usize, usize)], q: usize, p: usize, dd: usize) -> Option<usize> {
    let open = |x: usize, y: usize, c: Coloring| v.board.edge_between(x, y).filter(|&e| c.colored() >> e & 1 == 0);
    pivots.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).find_map(|(a, b)| {
        let e = open(q, a, c)?;
        let next = c.with(e, Player::First);
        open(b, p, next)?;
        open(b, dd, next)?;
        let red_wins = bits(v.board.full_mask() & !next.colored())
            .any(|f| completes(v.board, next, v.pattern, f, Player::Second));
        (!red_wins).then_some(e)
    })
}

/// Blue edges usable as the re-routing pivot: e_{m-2} first, then the
/// other blue edges not touching `avoid`, by index.
fn pivots(v: &View, first: (usize, usize), avoid: &[usize]) -> Vec<(usize, usize)> {
    let mut out = vec![first];
    for e in bits(v.c.blue) {
        let (a, b) = v.board.endpoints(e);
        if (a, b) != first && (b, a) != first && !avoid.contains(&a) && !avoid.contains(&b) {
            out.push((a, b));
        }
    }
    out
}

/// `|V(B) \ V(R)| <= 1`, and the exceptional vertex (if any) has blue
/// degree 1. Returns a description of the violation.
pub fn leaf_invariant_violation(board: &Board, coloring: Coloring) -> Option<String> {
    let touched = |mask: u128| {
        bits(mask).fold(0u32, |acc, e| {
            let (a, b) = board.endpoints(e);
            acc | 1 << a | 1 << b
        })
    };
    let exposed = touched(coloring.blue) & !touched(coloring.red);
    match exposed.count_ones() {
        0 => None,
        1 => {
            let w = exposed.trailing_zeros() as usize;
            let deg = (board.incident(w) & coloring.blue).count_ones();
            (deg != 1).then(|| format!("{} is free of red but has blue degree {deg}", board.vertex_name(w)))
        }
        k => Some(format!("{k} blue vertices are free of red")),
    }
}

/// Every first-part vertex has red degree at least its blue degree minus 1.
pub fn pair_invariant_violation(board: &Board, coloring: Coloring) -> Option<String> {
    let (first, _) = board.parts();
    first.into_iter().find_map(|x| {
        let b = (board.incident(x) & coloring.blue).count_ones();
        let r = (board.incident(x) & coloring.red).count_ones();
        (r + 1 < b).then(|| format!("{} has blue degree {b} but red degree {r}", board.vertex_name(x)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;
    use std::sync::Arc;

    fn pos(board: &str, moves: &[(usize, usize)]) -> Position {
        let board: Arc<Board> = Arc::new(board.parse().unwrap());
        let mut p = Position::new(board.clone());
        for &(u, v) in moves {
            p = p.apply_move(board.edge_between(u, v).unwrap()).unwrap();
        }
        p
    }

    fn first_reply(id: StrategyId, pattern: &str, board: &str, alice: (usize, usize)) -> (usize, usize) {
        let pattern = parse_pattern(pattern).unwrap();
        let p0 = pos(board, &[]);
        let p1 = p0.apply_move(p0.board().edge_between(alice.0, alice.1).unwrap()).unwrap();
        let (e, _) = strategy_move(id, &pattern, &p1, &StrategyMemory::new()).unwrap();
        p1.board().endpoints(e)
    }

    #[test]
    fn names_round_trip() {
        for id in StrategyId::ALL {
            assert_eq!(id.name().parse::<StrategyId>().unwrap(), id);
        }
        assert!("NOPE".parse::<StrategyId>().is_err());
    }

    #[test]
    fn matching_opening_is_first_edge() {
        let pattern = parse_pattern("3K2").unwrap();
        let (e, mem) = strategy_move(StrategyId::AliceMatchingComplete, &pattern, &pos("K6", &[]), &StrategyMemory::new())
            .unwrap();
        assert_eq!(pos("K6", &[]).board().endpoints(e), (0, 1));
        assert_eq!(mem.known().blue, 1);
    }

    #[test]
    fn block_complete_answers_on_k4() {
        assert_eq!(first_reply(StrategyId::BobStarBlockComplete, "K1,3", "K4", (0, 1)), (0, 2));
    }

    #[test]
    fn degree_mirror_on_k44() {
        // x1 y1 answered by x1 y2.
        assert_eq!(first_reply(StrategyId::BobDegreeMirror, "S2,2", "K4,4", (0, 4)), (0, 5));
    }

    #[test]
    fn star4_55_line() {
        let pattern = parse_pattern("K1,4").unwrap();
        let board: Arc<Board> = Arc::new("K5,5".parse().unwrap());
        let mut p = Position::new(board.clone());
        let mut mem = StrategyMemory::new();
        let (e1, m1) = strategy_move(StrategyId::AliceStar4_55, &pattern, &p, &mem).unwrap();
        assert_eq!(board.endpoints(e1), (0, 5));
        mem = m1;
        p = p.apply_move(e1).unwrap();
        p = p.apply_move(board.edge_between(0, 6).unwrap()).unwrap();
        let (e2, _) = strategy_move(StrategyId::AliceStar4_55, &pattern, &p, &mem).unwrap();
        // x2 y1
        assert_eq!(board.endpoints(e2), (1, 5));
    }

    #[test]
    fn domain_rejections() {
        let pattern = parse_pattern("2K2").unwrap();
        let err = strategy_move(StrategyId::AliceMatchingComplete, &pattern, &pos("K4", &[]), &StrategyMemory::new());
        assert!(matches!(err, Err(StrategyError::Domain { .. })));
        let star = parse_pattern("K1,3").unwrap();
        let err = strategy_move(StrategyId::BobStarBlockComplete, &star, &pos("K4", &[]), &StrategyMemory::new());
        assert!(matches!(err, Err(StrategyError::NotOurTurn(_))));
    }

    #[test]
    fn stale_memory_is_unreachable() {
        let pattern = parse_pattern("3K2").unwrap();
        let p = pos("K6", &[(0, 1), (2, 3)]);
        let err = strategy_move(StrategyId::AliceMatchingComplete, &pattern, &p, &StrategyMemory::new());
        assert!(matches!(err, Err(StrategyError::Unreachable { .. })));
    }

    #[test]
    fn leaf_invariant_detects_two_free_vertices() {
        let board: Board = "K4".parse().unwrap();
        let c = Coloring::default().with(board.edge_between(0, 1).unwrap(), Player::First);
        assert!(leaf_invariant_violation(&board, c).is_some());
        let c = c.with(board.edge_between(0, 2).unwrap(), Player::Second);
        assert!(leaf_invariant_violation(&board, c).is_none());
    }
}
