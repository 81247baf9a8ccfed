//! Target pattern graphs and subgraph containment inside a host graph.
//!
//! Patterns are small graphs without isolated vertices. Containment is the
//! ordinary (non-induced) subgraph relation; dedicated detectors exist for the
//! families where a direct test is much cheaper than a generic search.

use std::fmt;

use thiserror::Error;

/// Largest host graph handled by [`HostGraph`].
pub const MAX_HOST_VERTICES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("empty pattern text")]
    Empty,
    #[error("malformed pattern `{0}`")]
    Malformed(String),
    #[error("pattern parameter must be positive in `{0}`")]
    ZeroParameter(String),
    #[error("pattern `{0}` has no edges")]
    NoEdges(String),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("pattern has {0} vertices, at most {MAX_HOST_VERTICES} are supported")]
    TooLarge(usize),
}

/// Family tag of a pattern; parameters follow the usual graph notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `m` pairwise disjoint edges, `mK2`.
    Matching(usize),
    /// `K1,m`.
    Star(usize),
    /// Two stars `K1,m` and `K1,n` whose centers are joined.
    DoubleStar(usize, usize),
    /// Path on `m` vertices.
    Path(usize),
    /// Cycle on `m` vertices.
    Cycle(usize),
    /// `K1,m` plus `n` disjoint edges.
    StarUnionMatching(usize, usize),
    Complete(usize),
    CompleteMinusEdge(usize),
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    family: Family,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    bipartition: Option<Vec<u8>>,
    adjacency: Vec<u32>,
}

impl PatternGraph {
    pub fn matching(m: usize) -> Result<Self, PatternError> {
        nonzero(&[m], "matching")?;
        let edges = (0..m).map(|i| (2 * i, 2 * i + 1)).collect();
        Self::build(Family::Matching(m), 2 * m, edges)
    }

    pub fn star(m: usize) -> Result<Self, PatternError> {
        nonzero(&[m], "star")?;
        let edges = (1..=m).map(|leaf| (0, leaf)).collect();
        Self::build(Family::Star(m), m + 1, edges)
    }

    /// Centers are vertices 0 (with `m` leaves) and 1 (with `n` leaves).
    pub fn double_star(m: usize, n: usize) -> Result<Self, PatternError> {
        nonzero(&[m, n], "double star")?;
        let mut edges = vec![(0, 1)];
        edges.extend((0..m).map(|i| (0, 2 + i)));
        edges.extend((0..n).map(|i| (1, 2 + m + i)));
        Self::build(Family::DoubleStar(m, n), m + n + 2, edges)
    }

    pub fn path(m: usize) -> Result<Self, PatternError> {
        if m < 2 {
            return Err(PatternError::NoEdges(format!("P{m}")));
        }
        let edges = (0..m - 1).map(|i| (i, i + 1)).collect();
        Self::build(Family::Path(m), m, edges)
    }

    pub fn cycle(m: usize) -> Result<Self, PatternError> {
        if m < 3 {
            return Err(PatternError::Malformed(format!("C{m}")));
        }
        let mut edges: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, m - 1));
        Self::build(Family::Cycle(m), m, edges)
    }

    /// Star center 0 with leaves `1..=m`, then the matching edges.
    pub fn star_union_matching(m: usize, n: usize) -> Result<Self, PatternError> {
        nonzero(&[m, n], "star union matching")?;
        let mut edges: Vec<_> = (1..=m).map(|leaf| (0, leaf)).collect();
        edges.extend((0..n).map(|j| (m + 1 + 2 * j, m + 2 + 2 * j)));
        Self::build(Family::StarUnionMatching(m, n), m + 1 + 2 * n, edges)
    }

    pub fn complete(m: usize) -> Result<Self, PatternError> {
        if m < 2 {
            return Err(PatternError::NoEdges(format!("K{m}")));
        }
        let edges = all_pairs(m).collect();
        Self::build(Family::Complete(m), m, edges)
    }

    /// `K_m` without its last edge `(m-2, m-1)`.
    pub fn complete_minus_edge(m: usize) -> Result<Self, PatternError> {
        if m < 3 {
            return Err(PatternError::NoEdges(format!("K{m}-e")));
        }
        let edges = all_pairs(m).filter(|&e| e != (m - 2, m - 1)).collect();
        Self::build(Family::CompleteMinusEdge(m), m, edges)
    }

    /// Pattern given by an explicit edge list over vertices `0..k`.
    pub fn explicit(edges: &[(usize, usize)]) -> Result<Self, PatternError> {
        if edges.is_empty() {
            return Err(PatternError::NoEdges("edges:".into()));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(PatternError::Loop(a));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(PatternError::DuplicateEdge(e.0, e.1));
            }
            normalized.push(e);
        }
        let vertex_count = normalized.iter().map(|&(_, b)| b + 1).max().unwrap_or(0);
        Self::build(Family::Explicit, vertex_count, normalized)
    }

    fn build(
        family: Family,
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, PatternError> {
        if vertex_count > MAX_HOST_VERTICES {
            return Err(PatternError::TooLarge(vertex_count));
        }
        let mut adjacency = vec![0u32; vertex_count];
        for &(a, b) in &edges {
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        if let Some(v) = adjacency.iter().position(|&adj| adj == 0) {
            return Err(PatternError::IsolatedVertex(v));
        }
        let bipartition = two_coloring(&adjacency);
        Ok(Self { family, vertex_count, edges, bipartition, adjacency })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Side (0 or 1) of every vertex when the pattern is bipartite.
    pub fn bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Sizes of the two sides of the bipartition, larger first.
    pub fn part_sizes(&self) -> Option<(usize, usize)> {
        let sides = self.bipartition.as_ref()?;
        let zeros = sides.iter().filter(|&&s| s == 0).count();
        let ones = sides.len() - zeros;
        Some((zeros.max(ones), zeros.min(ones)))
    }

    /// True iff `host` contains a copy of this pattern.
    pub fn is_contained_in(&self, host: &HostGraph) -> bool {
        contains(host, self)
    }

    /// Canonical DSL text for this pattern.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Matching(1) => write!(f, "K2"),
            Family::Matching(m) => write!(f, "{m}K2"),
            Family::Star(m) => write!(f, "K1,{m}"),
            Family::DoubleStar(m, n) => write!(f, "S{m},{n}"),
            Family::Path(m) => write!(f, "P{m}"),
            Family::Cycle(m) => write!(f, "C{m}"),
            Family::StarUnionMatching(m, 1) => write!(f, "K1,{m}+K2"),
            Family::StarUnionMatching(m, n) => write!(f, "K1,{m}+{n}K2"),
            Family::Complete(m) => write!(f, "K{m}"),
            Family::CompleteMinusEdge(m) => write!(f, "K{m}-e"),
            Family::Explicit => {
                write!(f, "edges:")?;
                for (a, b) in &self.edges {
                    write!(f, "({a},{b})")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for PatternGraph {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

fn nonzero(params: &[usize], what: &str) -> Result<(), PatternError> {
    if params.contains(&0) {
        Err(PatternError::ZeroParameter(what.into()))
    } else {
        Ok(())
    }
}

fn all_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |a| (a + 1..m).map(move |b| (a, b)))
}

fn two_coloring(adjacency: &[u32]) -> Option<Vec<u8>> {
    let n = adjacency.len();
    let mut side = vec![u8::MAX; n];
    for start in 0..n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let mut nbrs = adjacency[v];
            while nbrs != 0 {
                let w = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if side[w] == u8::MAX {
                    side[w] = 1 - side[v];
                    stack.push(w);
                } else if side[w] == side[v] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// Parses the pattern DSL (case-insensitive):
/// `K2`, `<m>K2`, `K1,<m>`, `S<m>,<n>`, `P<m>`, `C<m>`, `K<m>`, `K<m>-e`,
/// `K1,<m>+<n>K2` and `edges:(a,b)(c,d)...`.
pub fn parse_pattern(text: &str) -> Result<PatternGraph, PatternError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(PatternError::Empty);
    }
    let lower: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || PatternError::Malformed(trimmed.to_string());

    if let Some(list) = lower.strip_prefix("edges:") {
        return PatternGraph::explicit(&parse_edge_list(list).ok_or_else(bad)?);
    }
    if let Some((star, matching)) = lower.split_once('+') {
        let m = star.strip_prefix("k1,").and_then(number).ok_or_else(bad)?;
        let n = matching_count(matching).ok_or_else(bad)?;
        return PatternGraph::star_union_matching(m, n);
    }
    if lower.ends_with("k2") && !lower.starts_with('k') {
        let n = matching_count(&lower).ok_or_else(bad)?;
        return PatternGraph::matching(n);
    }
    if lower == "k2" {
        return PatternGraph::matching(1);
    }
    if let Some(rest) = lower.strip_prefix("k1,") {
        return PatternGraph::star(number(rest).ok_or_else(bad)?);
    }
    if let Some(rest) = lower.strip_prefix('s') {
        let (m, n) = rest.split_once(',').ok_or_else(bad)?;
        return PatternGraph::double_star(number(m).ok_or_else(bad)?, number(n).ok_or_else(bad)?);
    }
    if let Some(rest) = lower.strip_prefix('p') {
        return PatternGraph::path(number(rest).ok_or_else(bad)?);
    }
    if let Some(rest) = lower.strip_prefix('c') {
        return PatternGraph::cycle(number(rest).ok_or_else(bad)?);
    }
    if let Some(rest) = lower.strip_prefix('k') {
        if let Some(m) = rest.strip_suffix("-e") {
            return PatternGraph::complete_minus_edge(number(m).ok_or_else(bad)?);
        }
        let m = number(rest).ok_or_else(bad)?;
        if m == 0 {
            return Err(PatternError::ZeroParameter(trimmed.to_string()));
        }
        return PatternGraph::complete(m);
    }
    Err(bad())
}

fn number(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || s.len() > 6 {
        return None;
    }
    s.parse().ok()
}

/// `<n>K2` or bare `K2`.
fn matching_count(s: &str) -> Option<usize> {
    let prefix = s.strip_suffix("k2")?;
    if prefix.is_empty() {
        Some(1)
    } else {
        number(prefix)
    }
}

fn parse_edge_list(s: &str) -> Option<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(')?;
        let close = body.find(')')?;
        let (a, b) = body[..close].split_once(',')?;
        edges.push((number(a)?, number(b)?));
        rest = &body[close + 1..];
    }
    Some(edges)
}

/// Simple undirected host graph on at most [`MAX_HOST_VERTICES`] vertices,
/// stored as adjacency bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HostGraph {
    n: usize,
    adj: [u32; MAX_HOST_VERTICES],
}

impl HostGraph {
    /// # Panics
    /// If `n` exceeds [`MAX_HOST_VERTICES`].
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_HOST_VERTICES, "host graph too large: {n} vertices");
        Self { n, adj: [0; MAX_HOST_VERTICES] }
    }

    /// Host on the smallest vertex range covering every endpoint.
    pub fn from_edges(edges: &[(usize, usize)]) -> Self {
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let mut host = Self::new(n);
        for &(a, b) in edges {
            host.add_edge(a, b);
        }
        host
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n].iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let mut higher = self.adj[a] & !((2u32 << a) - 1);
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                out.push((a, b));
            }
        }
        out
    }

    fn vertex_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }
}

/// True iff `host` contains a (not necessarily induced) copy of `pattern`.
pub fn contains(host: &HostGraph, pattern: &PatternGraph) -> bool {
    if pattern.edge_count() > host.edge_count() || pattern.vertex_count > host.n {
        return false;
    }
    match pattern.family {
        Family::Matching(m) => max_matching_at_least(host, host.vertex_mask(), m),
        Family::Star(m) => (0..host.n).any(|v| host.degree(v) >= m),
        Family::DoubleStar(m, n) => has_double_star(host, m, n),
        Family::StarUnionMatching(m, n) => has_star_union_matching(host, m, n),
        _ => generic_contains(host, pattern, None),
    }
}

/// True iff `host` contains a copy of `pattern` that uses the edge `(u, v)`.
///
/// Used after a move: when the host without `(u, v)` had no copy, any new
/// copy must pass through the new edge.
pub fn contains_through_edge(host: &HostGraph, pattern: &PatternGraph, u: usize, v: usize) -> bool {
    debug_assert!(host.has_edge(u, v));
    match pattern.family {
        Family::Star(m) => host.degree(u) >= m || host.degree(v) >= m,
        Family::Matching(_) | Family::DoubleStar(..) | Family::StarUnionMatching(..) => {
            contains(host, pattern)
        }
        _ => {
            pattern.edge_count() <= host.edge_count()
                && pattern.vertex_count <= host.n
                && generic_contains(host, pattern, Some((u, v)))
        }
    }
}

/// Generic backtracking monomorphism search with degree pruning. The oracle
/// for every specialised detector.
pub fn generic_contains(
    host: &HostGraph,
    pattern: &PatternGraph,
    anchor: Option<(usize, usize)>,
) -> bool {
    let k = pattern.vertex_count;
    if k > host.n {
        return false;
    }
    let mut search = Monomorphism::new(host, pattern);
    match anchor {
        None => {
            let order = search.order(None);
            search.extend(&order, 0)
        }
        Some((u, v)) => {
            for &(a, b) in pattern.edges() {
                let order = search.order(Some((a, b)));
                for (ha, hb) in [(u, v), (v, u)] {
                    if host.degree(ha) < pattern.degree(a) || host.degree(hb) < pattern.degree(b) {
                        continue;
                    }
                    search.assign(a, ha);
                    search.assign(b, hb);
                    let found = search.extend(&order, 2);
                    search.unassign(b, hb);
                    search.unassign(a, ha);
                    if found {
                        return true;
                    }
                }
            }
            false
        }
    }
}

struct Monomorphism<'a> {
    host: &'a HostGraph,
    pattern: &'a PatternGraph,
    image: [u8; MAX_HOST_VERTICES],
    used: u32,
}

const UNMAPPED: u8 = u8::MAX;

impl<'a> Monomorphism<'a> {
    fn new(host: &'a HostGraph, pattern: &'a PatternGraph) -> Self {
        Self { host, pattern, image: [UNMAPPED; MAX_HOST_VERTICES], used: 0 }
    }

    /// Pattern vertex order: anchor first, then repeatedly the vertex with the
    /// most already-ordered neighbours (ties: higher degree, lower index).
    fn order(&self, anchor: Option<(usize, usize)>) -> Vec<usize> {
        let k = self.pattern.vertex_count;
        let mut order = Vec::with_capacity(k);
        let mut placed = 0u32;
        if let Some((a, b)) = anchor {
            order.extend([a, b]);
            placed |= (1 << a) | (1 << b);
        }
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    let adj = self.pattern.adjacency[v];
                    ((adj & placed).count_ones(), adj.count_ones(), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            order.push(next);
            placed |= 1 << next;
        }
        order
    }

    fn assign(&mut self, p: usize, h: usize) {
        self.image[p] = h as u8;
        self.used |= 1 << h;
    }

    fn unassign(&mut self, p: usize, h: usize) {
        self.image[p] = UNMAPPED;
        self.used &= !(1 << h);
    }

    fn extend(&mut self, order: &[usize], depth: usize) -> bool {
        if depth == order.len() {
            return true;
        }
        let p = order[depth];
        let need = self.pattern.degree(p);
        let mut candidates = self.host.vertex_mask() & !self.used;
        let mut nbrs = self.pattern.adjacency[p];
        while nbrs != 0 {
            let q = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            let hq = self.image[q];
            if hq != UNMAPPED {
                candidates &= self.host.adj[hq as usize];
            }
        }
        while candidates != 0 {
            let h = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if self.host.degree(h) < need {
                continue;
            }
            self.assign(p, h);
            let found = self.extend(order, depth + 1);
            self.unassign(p, h);
            if found {
                return true;
            }
        }
        false
    }
}

/// True iff the subgraph induced on `avail` has a matching of size `need`.
pub(crate) fn max_matching_at_least(host: &HostGraph, avail: u32, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    // Only vertices with a partner inside `avail` matter.
    let mut live = 0u32;
    let mut rest = avail;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if host.adj[v] & avail != 0 {
            live |= 1 << v;
        }
    }
    if (live.count_ones() as usize) < 2 * need {
        return false;
    }
    let v = live.trailing_zeros() as usize;
    let mut partners = host.adj[v] & live;
    let without_v = live & !(1 << v);
    while partners != 0 {
        let u = partners.trailing_zeros() as usize;
        partners &= partners - 1;
        if max_matching_at_least(host, without_v & !(1 << u), need - 1) {
            return true;
        }
    }
    max_matching_at_least(host, without_v, need)
}

fn has_double_star(host: &HostGraph, m: usize, n: usize) -> bool {
    for (u, v) in host.edges() {
        let a = host.adj[u] & !(1 << v);
        let b = host.adj[v] & !(1 << u);
        let (ca, cb) = (a.count_ones() as usize, b.count_ones() as usize);
        let union = (a | b).count_ones() as usize;
        if union < m + n {
            continue;
        }
        // Hall's condition for two disjoint leaf sets drawn from `a` and `b`.
        if (ca >= m && cb >= n) || (ca >= n && cb >= m) {
            return true;
        }
    }
    false
}

fn has_star_union_matching(host: &HostGraph, m: usize, n: usize) -> bool {
    let all = host.vertex_mask();
    for c in 0..host.n {
        let nbrs = host.adj[c];
        if (nbrs.count_ones() as usize) < m {
            continue;
        }
        let leaves: Vec<usize> = (0..host.n).filter(|&w| nbrs >> w & 1 == 1).collect();
        let mut found = false;
        for_each_subset(&leaves, m, &mut |subset| {
            if !found {
                let used = subset.iter().fold(1u32 << c, |acc, &w| acc | 1 << w);
                found = max_matching_at_least(host, all & !used, n);
            }
        });
        if found {
            return true;
        }
    }
    false
}

fn for_each_subset(items: &[usize], size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], size: usize, start: usize, acc: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if acc.len() == size {
            visit(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - acc.len() {
                break;
            }
            acc.push(items[i]);
            go(items, size, i + 1, acc, visit);
            acc.pop();
        }
    }
    go(items, size, 0, &mut Vec::with_capacity(size), visit);
}

/// True iff the host given as an edge list contains `pattern`.
pub fn contains_edges(host_edges: &[(usize, usize)], pattern: &PatternGraph) -> bool {
    contains(&HostGraph::from_edges(host_edges), pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PatternGraph {
        parse_pattern(s).unwrap()
    }

    #[test]
    fn parses_families() {
        let m = p("3K2");
        assert_eq!(m.family(), Family::Matching(3));
        assert_eq!(m.vertex_count(), 6);
        assert_eq!(m.edges(), &[(0, 1), (2, 3), (4, 5)]);

        let s = p("S2,3");
        assert_eq!(s.family(), Family::DoubleStar(2, 3));
        assert_eq!((s.vertex_count(), s.edge_count()), (7, 6));
        assert_eq!((s.degree(0), s.degree(1)), (3, 4));

        let u = p("K1,4+2K2");
        assert_eq!(u.family(), Family::StarUnionMatching(4, 2));
        assert_eq!((u.vertex_count(), u.edge_count()), (9, 6));

        assert_eq!(p("k2").family(), Family::Matching(1));
        assert_eq!(p("K1,3").family(), Family::Star(3));
        assert_eq!(p("p4").edge_count(), 3);
        assert_eq!(p("C4").edge_count(), 4);
        assert_eq!(p("K4").edge_count(), 6);
        assert_eq!(p("K4-e").edge_count(), 5);
        assert_eq!(p("K1,2+K2").family(), Family::StarUnionMatching(2, 1));
        assert_eq!(p("edges:(0,1)(0,2)(1,2)(2,3)").edge_count(), 4);
    }

    #[test]
    fn rejects_bad_text() {
        assert_eq!(parse_pattern("  "), Err(PatternError::Empty));
        assert!(matches!(parse_pattern("0K2"), Err(PatternError::ZeroParameter(_))));
        assert!(matches!(parse_pattern("K1,0"), Err(PatternError::ZeroParameter(_))));
        assert!(matches!(parse_pattern("S0,2"), Err(PatternError::ZeroParameter(_))));
        assert!(matches!(parse_pattern("Q7"), Err(PatternError::Malformed(_))));
        assert!(matches!(parse_pattern("K1,x"), Err(PatternError::Malformed(_))));
        assert!(matches!(parse_pattern("edges:(0,2)"), Err(PatternError::IsolatedVertex(1))));
        assert!(matches!(parse_pattern("edges:(1,1)"), Err(PatternError::Loop(1))));
        assert!(matches!(parse_pattern("edges:(0,1)(1,0)"), Err(PatternError::DuplicateEdge(0, 1))));
        assert!(parse_pattern("P1").is_err());
        assert!(parse_pattern("K1").is_err());
    }

    #[test]
    fn max_degrees() {
        assert_eq!(p("K1,4").max_degree(), 4);
        assert_eq!(p("3K2").max_degree(), 1);
        assert_eq!(p("S2,3").max_degree(), 4);
    }

    #[test]
    fn bipartitions() {
        assert!(p("C4").is_bipartite());
        assert!(!p("K3").is_bipartite());
        assert_eq!(p("K1,2+K2").part_sizes(), Some((3, 2)));
        assert_eq!(p("S2,3").part_sizes(), Some((4, 3)));
    }

    #[test]
    fn render_round_trips() {
        for s in ["K2", "3K2", "K1,4", "S2,3", "P5", "C4", "K1,2+K2", "K1,4+2K2", "K4", "K4-e", "edges:(0,1)(1,2)"] {
            assert_eq!(p(s).render(), s);
            assert_eq!(p(&p(s).render()), p(s));
        }
    }

    #[test]
    fn small_containment_examples() {
        assert!(contains_edges(&[(0, 1), (2, 3)], &p("2K2")));
        assert!(!contains_edges(&[(0, 1), (1, 2)], &p("2K2")));
        assert!(contains_edges(&[(0, 1), (1, 2), (2, 3)], &p("S1,1")));
        assert!(!contains_edges(&[(0, 1), (1, 2), (2, 0)], &p("S1,1")));
        assert!(contains_edges(&[(0, 1), (1, 2), (2, 0)], &p("K3")));
        assert!(!contains_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)], &p("K3")));
    }

    #[test]
    fn double_star_with_shared_neighbours() {
        // u=0, v=1 share neighbours 2 and 3; S2,2 needs four distinct leaves.
        let host = HostGraph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(!contains(&host, &p("S2,2")));
        assert!(!generic_contains(&host, &p("S2,2"), None));
        assert!(contains(&host, &p("S1,1")));
    }

    #[test]
    fn anchored_search_requires_the_edge() {
        let host = HostGraph::from_edges(&[(0, 1), (1, 2), (2, 0), (3, 4)]);
        let tri = p("K3");
        assert!(contains_through_edge(&host, &tri, 0, 1));
        assert!(!generic_contains(&host, &tri, Some((3, 4))));
    }
}
