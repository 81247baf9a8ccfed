//! Automorphism-invariant keys for positions.
//!
//! The key of a position is the lexicographically smallest per-edge color
//! string (`Uncolored < Blue < Red`, edge 0 first) over every relabeling of
//! the board by one of its automorphisms: all vertex permutations of `K_n`,
//! part-preserving permutations of `K_{n1,n2}`, and additionally the part
//! swap when `n1 == n2`. Only relabelings that list vertices in the order of
//! an isomorphism-invariant refinement of their color degrees are examined,
//! and vertices with identical color rows are treated as interchangeable.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::arena::{bits, Board, BoardKind, Coloring, Position};
use crate::pattern::MAX_HOST_VERTICES;

/// Default largest part size (or `n` for `K_n`) accepted for canonicalization.
pub const DEFAULT_BOUND: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("board {board} exceeds the canonicalization bound {bound}; use hash-only mode (raw coloring keys, no symmetry reduction)")]
    BoundExceeded { board: String, bound: usize },
    #[error("key bytes have length {got}, expected {expected}")]
    BadKeyLength { got: usize, expected: usize },
    #[error("invalid color code in key bytes")]
    BadKeyCode,
}

/// Minimal color string of a position's orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    blue: u128,
    red: u128,
    edges: u8,
}

impl CanonicalKey {
    /// Key holding the coloring verbatim (no symmetry reduction).
    pub fn raw(board: &Board, coloring: Coloring) -> Self {
        Self { blue: coloring.blue, red: coloring.red, edges: board.edge_count() as u8 }
    }

    pub fn coloring(&self) -> Coloring {
        Coloring { blue: self.blue, red: self.red }
    }

    pub fn edge_count(&self) -> usize {
        self.edges as usize
    }

    /// Two bits per edge, edge 0 in the high bits of byte 0; byte order
    /// agrees with the key order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.edges as usize;
        let mut out = vec![0u8; n.div_ceil(4)];
        for i in 0..n {
            let code = (self.blue >> i & 1) as u8 | ((self.red >> i & 1) as u8) << 1;
            out[i / 4] |= code << (6 - 2 * (i % 4));
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], edges: usize) -> Result<Self, CanonError> {
        let expected = edges.div_ceil(4);
        if bytes.len() != expected || edges > 128 {
            return Err(CanonError::BadKeyLength { got: bytes.len(), expected });
        }
        let (mut blue, mut red) = (0u128, 0u128);
        for i in 0..edges {
            match bytes[i / 4] >> (6 - 2 * (i % 4)) & 3 {
                0 => {}
                1 => blue |= 1 << i,
                2 => red |= 1 << i,
                _ => return Err(CanonError::BadKeyCode),
            }
        }
        let trailing = edges % 4;
        if trailing != 0 && bytes[expected - 1] & ((1u8 << (8 - 2 * trailing)) - 1) != 0 {
            return Err(CanonError::BadKeyCode);
        }
        Ok(Self { blue, red, edges: edges as u8 })
    }
}

/// Lexicographic order of two colorings as color strings.
pub fn compare_colorings(a: Coloring, b: Coloring) -> Ordering {
    let diff = (a.blue ^ b.blue) | (a.red ^ b.red);
    if diff == 0 {
        return Ordering::Equal;
    }
    let i = diff.trailing_zeros();
    let code = |c: Coloring| (c.blue >> i & 1) as u8 + 2 * (c.red >> i & 1) as u8;
    code(a).cmp(&code(b))
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .cmp(&other.edges)
            .then_with(|| compare_colorings(self.coloring(), other.coloring()))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.edges as usize {
            let c = if self.blue >> i & 1 == 1 {
                'b'
            } else if self.red >> i & 1 == 1 {
                'r'
            } else {
                '.'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Canonical key together with the relabeling that attains it.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// `new_label[v]` is the vertex `v` is sent to.
    pub new_label: Vec<u8>,
}

impl CanonicalForm {
    /// Image of an edge under the canonical relabeling.
    pub fn map_edge(&self, board: &Board, edge: usize) -> usize {
        let (a, b) = board.endpoints(edge);
        board
            .edge_between(self.new_label[a] as usize, self.new_label[b] as usize)
            .expect("automorphism maps edges to edges")
    }
}

pub fn canonical_key(position: &Position) -> Result<CanonicalKey, CanonError> {
    canonical_form(position.board(), position.coloring(), DEFAULT_BOUND).map(|f| f.key)
}

pub fn canonical_key_with_bound(position: &Position, bound: usize) -> Result<CanonicalKey, CanonError> {
    canonical_form(position.board(), position.coloring(), bound).map(|f| f.key)
}

pub fn check_bound(board: &Board, bound: usize) -> Result<(), CanonError> {
    let ok = match board.kind() {
        BoardKind::Complete(n) => n <= bound,
        BoardKind::Bipartite(a, b) => a <= bound && b <= bound,
    };
    if ok {
        Ok(())
    } else {
        Err(CanonError::BoundExceeded { board: board.spec(), bound })
    }
}

pub fn canonical_form(board: &Board, coloring: Coloring, bound: usize) -> Result<CanonicalForm, CanonError> {
    check_bound(board, bound)?;
    let mut best = search(board, coloring, false);
    if let BoardKind::Bipartite(a, b) = board.kind() {
        if a == b {
            let swapped = search(board, coloring, true);
            if compare_colorings(swapped.key.coloring(), best.key.coloring()) == Ordering::Less {
                best = swapped;
            }
        }
    }
    Ok(best)
}

/// Image of `coloring` under the vertex map `new_label`.
pub fn relabel(board: &Board, coloring: Coloring, new_label: &[u8]) -> Coloring {
    let mut out = Coloring::default();
    for e in bits(coloring.colored()) {
        let (a, b) = board.endpoints(e);
        let image = board
            .edge_between(new_label[a] as usize, new_label[b] as usize)
            .expect("vertex map must be a board automorphism");
        if coloring.blue >> e & 1 == 1 {
            out.blue |= 1 << image;
        } else {
            out.red |= 1 << image;
        }
    }
    out
}

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

struct Rows {
    n: usize,
    blue: [u32; MAX_HOST_VERTICES],
    red: [u32; MAX_HOST_VERTICES],
}

fn rows(board: &Board, coloring: Coloring, swap: bool) -> Rows {
    let n = board.vertex_count();
    let n1 = match board.kind() {
        BoardKind::Bipartite(a, _) => a,
        BoardKind::Complete(_) => 0,
    };
    // With `swap`, the two (equal) parts exchange roles.
    let relabel = |v: usize| if swap { (v + n1) % n } else { v };
    let mut r = Rows { n, blue: [0; MAX_HOST_VERTICES], red: [0; MAX_HOST_VERTICES] };
    for e in bits(coloring.colored()) {
        let (a, b) = board.endpoints(e);
        let (a, b) = (relabel(a), relabel(b));
        let target = if coloring.blue >> e & 1 == 1 { &mut r.blue } else { &mut r.red };
        target[a] |= 1 << b;
        target[b] |= 1 << a;
    }
    r
}

fn search(board: &Board, coloring: Coloring, swap: bool) -> CanonicalForm {
    let rows = rows(board, coloring, swap);
    let n = rows.n;
    let labels = refine(board, &rows);

    // Cells: vertices sorted by (part, refined label); cell boundaries where
    // the pair changes.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (board.part_of(v), labels[v], v));
    let mut cell_of_slot = vec![0usize; n];
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (slot, &v) in order.iter().enumerate() {
        let key = (board.part_of(v), labels[v]);
        if slot == 0 || key != (board.part_of(order[slot - 1]), labels[order[slot - 1]]) {
            cells.push((slot, slot));
        }
        cells.last_mut().expect("cell exists").1 = slot + 1;
        cell_of_slot[slot] = cells.len() - 1;
    }

    // Interchangeable vertices inside each cell: identical color rows apart
    // from each other.
    let mut twin_class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &(start, end) in &cells {
        for i in start..end {
            let v = order[i];
            if twin_class[v] != usize::MAX {
                continue;
            }
            twin_class[v] = classes.len();
            let mut members = vec![v];
            for &w in &order[i + 1..end] {
                if twin_class[w] == usize::MAX && twins(&rows, v, w) {
                    twin_class[w] = classes.len();
                    members.push(w);
                }
            }
            classes.push(members);
        }
    }
    let mut class_lists: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (c, members) in classes.iter().enumerate() {
        class_lists[cell_of_slot[order.iter().position(|&v| v == members[0]).expect("member")]].push(c);
    }

    let mut state = Enumerator {
        board,
        rows: &rows,
        cells: &cells,
        cell_of_slot: &cell_of_slot,
        class_lists: &class_lists,
        classes: &classes,
        remaining: classes.iter().map(|c| c.len()).collect(),
        at_slot: vec![0u8; n],
        best: None,
        best_labels: vec![0u8; n],
    };
    state.descend(0);

    let best = state.best.expect("at least one labeling");
    // `at_slot` in the best labeling gives new -> vertex (in swapped space).
    let mut new_label = vec![0u8; n];
    let n1 = match board.kind() {
        BoardKind::Bipartite(a, _) => a,
        BoardKind::Complete(_) => 0,
    };
    for (slot, &v) in state.best_labels.iter().enumerate() {
        let original = if swap { (v as usize + n - n1) % n } else { v as usize };
        new_label[original] = slot as u8;
    }
    CanonicalForm {
        key: CanonicalKey { blue: best.blue, red: best.red, edges: board.edge_count() as u8 },
        new_label,
    }
}

fn twins(rows: &Rows, v: usize, w: usize) -> bool {
    let clear = !((1u32 << v) | (1u32 << w));
    rows.blue[v] & clear == rows.blue[w] & clear && rows.red[v] & clear == rows.red[w] & clear
}

/// Iterated color refinement starting from (blue degree, red degree).
fn refine(board: &Board, rows: &Rows) -> Vec<u64> {
    let n = rows.n;
    let mut labels: Vec<u64> = (0..n)
        .map(|v| mix((board.part_of(v) as u64) << 40 | (rows.blue[v].count_ones() as u64) << 20 | rows.red[v].count_ones() as u64))
        .collect();
    let distinct = |l: &[u64]| {
        let mut s = l.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len()
    };
    let mut classes = distinct(&labels);
    let mut scratch = Vec::with_capacity(n);
    for _ in 0..n {
        if classes == n {
            break;
        }
        let next: Vec<u64> = (0..n)
            .map(|v| {
                scratch.clear();
                for w in bits(rows.blue[v] as u128) {
                    scratch.push(mix(labels[w] ^ 0x1));
                }
                for w in bits(rows.red[v] as u128) {
                    scratch.push(mix(labels[w] ^ 0x2));
                }
                scratch.sort_unstable();
                scratch.iter().fold(mix(labels[v]), |h, &x| mix(h ^ x))
            })
            .collect();
        let c = distinct(&next);
        labels = next;
        if c == classes {
            break;
        }
        classes = c;
    }
    labels
}

struct Enumerator<'a> {
    board: &'a Board,
    rows: &'a Rows,
    cells: &'a [(usize, usize)],
    cell_of_slot: &'a [usize],
    class_lists: &'a [Vec<usize>],
    classes: &'a [Vec<usize>],
    remaining: Vec<usize>,
    at_slot: Vec<u8>,
    best: Option<Coloring>,
    best_labels: Vec<u8>,
}

impl Enumerator<'_> {
    fn descend(&mut self, slot: usize) {
        if slot == self.at_slot.len() {
            self.leaf();
            return;
        }
        let cell = self.cell_of_slot[slot];
        debug_assert!(slot >= self.cells[cell].0 && slot < self.cells[cell].1);
        for i in 0..self.class_lists[cell].len() {
            let c = self.class_lists[cell][i];
            let left = self.remaining[c];
            if left == 0 {
                continue;
            }
            let members = &self.classes[c];
            self.at_slot[slot] = members[members.len() - left] as u8;
            self.remaining[c] -= 1;
            self.descend(slot + 1);
            self.remaining[c] += 1;
        }
    }

    fn leaf(&mut self) {
        let mut image = Coloring::default();
        for e in 0..self.board.edge_count() {
            let (a, b) = self.board.endpoints(e);
            let (va, vb) = (self.at_slot[a] as usize, self.at_slot[b] as usize);
            if self.rows.blue[va] >> vb & 1 == 1 {
                image.blue |= 1 << e;
            } else if self.rows.red[va] >> vb & 1 == 1 {
                image.red |= 1 << e;
            }
        }
        let better = match self.best {
            None => true,
            Some(b) => compare_colorings(image, b) == Ordering::Less,
        };
        if better {
            self.best = Some(image);
            self.best_labels.copy_from_slice(&self.at_slot);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn board(s: &str) -> Arc<Board> {
        Arc::new(s.parse().unwrap())
    }

    fn key_of(b: &Arc<Board>, blue: &[(usize, usize)], red: &[(usize, usize)]) -> CanonicalKey {
        let mask = |es: &[(usize, usize)]| es.iter().fold(0u128, |m, &(u, v)| m | 1 << b.edge_between(u, v).unwrap());
        let pos = Position::from_coloring(b.clone(), Coloring { blue: mask(blue), red: mask(red) });
        canonical_key(&pos).unwrap()
    }

    #[test]
    fn single_blue_edges_on_k4_agree() {
        let b = board("K4");
        let first = key_of(&b, &[(0, 1)], &[]);
        for e in 0..6 {
            assert_eq!(key_of(&b, &[b.endpoints(e)], &[]), first);
        }
    }

    #[test]
    fn bipartite_part_preserving_symmetry() {
        let b = board("K3,3");
        // x1y1 versus x2y2.
        assert_eq!(key_of(&b, &[(0, 3)], &[]), key_of(&b, &[(1, 4)], &[]));
        assert_ne!(key_of(&b, &[(0, 3)], &[]), key_of(&b, &[], &[(0, 3)]));
    }

    #[test]
    fn part_swap_only_on_square_boards() {
        let sq = board("K3,3");
        // Two blue edges sharing x1 versus two sharing y1.
        assert_eq!(key_of(&sq, &[(0, 3), (0, 4)], &[]), key_of(&sq, &[(0, 3), (1, 3)], &[]));
        let rect = board("K3,4");
        assert_ne!(key_of(&rect, &[(0, 3), (0, 4)], &[]), key_of(&rect, &[(0, 3), (1, 3)], &[]));
    }

    #[test]
    fn key_bytes_round_trip_and_order() {
        let b = board("K5");
        let k1 = key_of(&b, &[(0, 1)], &[(2, 3)]);
        let k2 = key_of(&b, &[(0, 1), (1, 2)], &[(2, 3)]);
        for k in [k1, k2] {
            assert_eq!(CanonicalKey::from_bytes(&k.to_bytes(), 10).unwrap(), k);
        }
        assert_eq!(k1.cmp(&k2), k1.to_bytes().cmp(&k2.to_bytes()));
        assert!(CanonicalKey::from_bytes(&[0xff, 0, 0], 10).is_err());
        assert!(CanonicalKey::from_bytes(&[0], 10).is_err());
    }

    #[test]
    fn bound_is_enforced() {
        let b = board("K10");
        let err = canonical_key(&Position::new(b)).unwrap_err();
        assert!(matches!(err, CanonError::BoundExceeded { bound: 9, .. }));
        assert!(canonical_key_with_bound(&Position::new(board("K10")), 10).is_ok());
    }

    #[test]
    fn canonical_labeling_maps_to_key() {
        let b = board("K6");
        let pos = Position::from_coloring(b.clone(), Coloring { blue: 0b1001_0000_0100, red: 0b10_0000_0001_0000 });
        let form = canonical_form(&b, pos.coloring(), DEFAULT_BOUND).unwrap();
        assert_eq!(relabel(&b, pos.coloring(), &form.new_label), form.key.coloring());
    }
}
