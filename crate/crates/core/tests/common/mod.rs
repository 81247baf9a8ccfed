//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the crate's search or detection code.

#![allow(dead_code)]

use std::collections::HashMap;

use rach_core::{Board, Coloring, PatternGraph};

/// Brute-force subgraph test: try every injective vertex map.
pub fn brute_contains(host_edges: &[(usize, usize)], n: usize, pattern: &[(usize, usize)]) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in host_edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let k = pattern.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    if k > n {
        return false;
    }
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; n];
    fn go(i: usize, k: usize, image: &mut [usize], used: &mut [bool], adj: &[Vec<bool>], pattern: &[(usize, usize)]) -> bool {
        if i == k {
            return pattern.iter().all(|&(a, b)| adj[image[a]][image[b]]);
        }
        for h in 0..used.len() {
            if used[h] {
                continue;
            }
            // Edges to already placed vertices must exist.
            let ok = pattern.iter().all(|&(a, b)| {
                let (x, y) = if a == i { (b, h) } else if b == i { (a, h) } else { return true };
                x > i || adj[image[x]][y]
            });
            if !ok {
                continue;
            }
            used[h] = true;
            image[i] = h;
            if go(i + 1, k, image, used, adj, pattern) {
                return true;
            }
            used[h] = false;
        }
        image[i] = usize::MAX;
        false
    }
    go(0, k, &mut image, &mut used, &adj, pattern)
}

fn edges_of(board: &Board, mask: u128) -> Vec<(usize, usize)> {
    (0..board.edge_count()).filter(|e| mask >> e & 1 == 1).map(|e| board.endpoints(e)).collect()
}

/// Plain minimax without symmetry or pruning. +1 first player wins, 0 draw,
/// -1 second player wins.
pub struct Naive<'a> {
    board: &'a Board,
    pattern: Vec<(usize, usize)>,
    memo: HashMap<Coloring, i8>,
}

impl<'a> Naive<'a> {
    pub fn new(board: &'a Board, pattern: &PatternGraph) -> Self {
        Self { board, pattern: pattern.edges().to_vec(), memo: HashMap::new() }
    }

    fn has(&self, mask: u128) -> bool {
        brute_contains(&edges_of(self.board, mask), self.board.vertex_count(), &self.pattern)
    }

    /// Terminal value, if the position is over.
    pub fn terminal(&self, c: Coloring) -> Option<i8> {
        if self.has(c.blue) {
            Some(1)
        } else if self.has(c.red) {
            Some(-1)
        } else if c.colored() == self.board.full_mask() {
            Some(0)
        } else {
            None
        }
    }

    pub fn value(&mut self, c: Coloring) -> i8 {
        if let Some(v) = self.terminal(c) {
            return v;
        }
        if let Some(&v) = self.memo.get(&c) {
            return v;
        }
        let first = c.blue.count_ones() == c.red.count_ones();
        let mut best = if first { -2 } else { 2 };
        for e in 0..self.board.edge_count() {
            if c.colored() >> e & 1 == 1 {
                continue;
            }
            let next = if first {
                Coloring { blue: c.blue | 1 << e, ..c }
            } else {
                Coloring { red: c.red | 1 << e, ..c }
            };
            let v = self.value(next);
            best = if first { best.max(v) } else { best.min(v) };
        }
        self.memo.insert(c, best);
        best
    }

    /// Every position reachable from the empty board (terminal ones included).
    pub fn reachable(&self) -> Vec<Coloring> {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![Coloring::default()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            if self.terminal(c).is_some() {
                continue;
            }
            let first = c.blue.count_ones() == c.red.count_ones();
            for e in 0..self.board.edge_count() {
                if c.colored() >> e & 1 == 0 {
                    stack.push(if first { Coloring { blue: c.blue | 1 << e, ..c } } else { Coloring { red: c.red | 1 << e, ..c } });
                }
            }
        }
        let mut out: Vec<Coloring> = seen.into_iter().collect();
        out.sort_by_key(|c| (c.blue, c.red));
        out
    }
}
