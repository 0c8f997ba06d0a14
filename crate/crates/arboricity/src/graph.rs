//! Simple undirected graphs with dense ids, graph6 and adjacency-list codecs,
//! fixed named constructions, and the structural statistics used by the
//! discharging and extension machinery.

use crate::rational::Rational;
use num::bigint::BigInt;
use num::rational::Ratio;
use num::Zero;
use std::collections::{BTreeSet, VecDeque};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for {1} vertices")]
    OutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::OutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::OutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    e.push((u, v));
                }
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn average_degree(&self) -> Rational {
        if self.n == 0 {
            return Rational::zero();
        }
        Ratio::new(BigInt::from(2 * self.edge_count()), BigInt::from(self.n))
    }

    /// Number of neighbors of degree at least three.
    pub fn effective_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&u| self.degree(u) >= 3).count()
    }

    /// Light: effective degree at most three and degree at most five.
    pub fn is_light(&self, v: usize) -> bool {
        self.effective_degree(v) <= 3 && self.degree(v) <= 5
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            // BFS from s; a non-tree edge between explored vertices closes a
            // cycle of length dist(u) + dist(w) + 1. Minimizing over all start
            // vertices yields the exact girth.
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if w != parent[u] {
                        let c = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| c < b) {
                            best = Some(c);
                        }
                    }
                }
            }
        }
        best
    }

    /// Does the given vertex set induce a forest?
    pub fn is_induced_forest(&self, set: &BTreeSet<usize>) -> bool {
        let ids: Vec<usize> = set.iter().copied().collect();
        let index = |v: usize| ids.binary_search(&v).ok();
        let mut uf: Vec<usize> = (0..ids.len()).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for (iu, &u) in ids.iter().enumerate() {
            for &v in &self.adj[u] {
                if v > u {
                    if let Some(iv) = index(v) {
                        let (ru, rv) = (find(&mut uf, iu), find(&mut uf, iv));
                        if ru == rv {
                            return false;
                        }
                        uf[ru] = rv;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on `keep`, plus the map from new ids to original ids.
    pub fn induced_subgraph(&self, keep: &BTreeSet<usize>) -> (Graph, Vec<usize>) {
        let ids: Vec<usize> = keep.iter().copied().filter(|&v| v < self.n).collect();
        let mut g = Graph::new(ids.len());
        for (iu, &u) in ids.iter().enumerate() {
            for &v in &self.adj[u] {
                if v > u {
                    if let Ok(iv) = ids.binary_search(&v) {
                        g.adj[iu].insert(iv);
                        g.adj[iv].insert(iu);
                    }
                }
            }
        }
        (g, ids)
    }

    /// Induced subgraph after deleting `drop`, plus the new-to-old id map.
    pub fn delete_vertices(&self, drop: &BTreeSet<usize>) -> (Graph, Vec<usize>) {
        let keep: BTreeSet<usize> = (0..self.n).filter(|v| !drop.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, {:?})", self.n, self.edge_count(), self.edges())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("invalid byte {byte:#04x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated graph6 string: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing data at offset {0}")]
    TrailingData(usize),
    #[error("graph too large: {0} vertices")]
    TooLarge(u64),
}

const G6_MAX: u64 = 1 << 20;

/// Decodes the standard graph6 ASCII encoding. An optional `>>graph6<<`
/// prefix and surrounding whitespace are accepted.
pub fn from_graph6(s: &str) -> Result<Graph, Graph6Error> {
    let t = s.trim();
    let t = t.strip_prefix(">>graph6<<").unwrap_or(t);
    let bytes = t.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let sextet = |offset: usize| -> Result<u64, Graph6Error> {
        let b = *bytes
            .get(offset)
            .ok_or(Graph6Error::Truncated { expected: offset + 1, found: bytes.len() })?;
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte { offset, byte: b });
        }
        Ok((b - 63) as u64)
    };
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() > 1 && bytes[1] == 126 {
            let mut n = 0u64;
            for k in 0..6 {
                n = (n << 6) | sextet(2 + k)?;
            }
            (n, 8)
        } else {
            let mut n = 0u64;
            for k in 0..3 {
                n = (n << 6) | sextet(1 + k)?;
            }
            (n, 4)
        }
    } else {
        (sextet(0)?, 1)
    };
    if n > G6_MAX {
        return Err(Graph6Error::TooLarge(n));
    }
    let n = n as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < pos + nbytes {
        return Err(Graph6Error::Truncated { expected: pos + nbytes, found: bytes.len() });
    }
    let mut g = Graph::new(n);
    let mut bit = 0usize;
    let mut current = 0u64;
    let mut have = 0usize;
    for j in 1..n {
        for i in 0..j {
            if have == 0 {
                current = sextet(pos)?;
                pos += 1;
                have = 6;
            }
            have -= 1;
            if (current >> have) & 1 == 1 {
                g.adj[i].insert(j);
                g.adj[j].insert(i);
            }
            bit += 1;
        }
    }
    let _ = bit;
    // padding bits must be zero in the canonical encoding
    if have > 0 && current & ((1 << have) - 1) != 0 {
        return Err(Graph6Error::InvalidByte { offset: pos - 1, byte: bytes[pos - 1] });
    }
    if pos != bytes.len() {
        return Err(Graph6Error::TrailingData(pos));
    }
    Ok(g)
}

/// Encodes into the canonical graph6 form (shortest header, zero padding).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(63 + n as u8);
    } else if n <= 258047 {
        out.push(126);
        for k in (0..3).rev() {
            out.push(63 + ((n >> (6 * k)) & 63) as u8);
        }
    } else {
        out.push(126);
        out.push(126);
        for k in (0..6).rev() {
            out.push(63 + ((n >> (6 * k)) & 63) as u8);
        }
    }
    let mut current = 0u8;
    let mut have = 0usize;
    for j in 1..n {
        for i in 0..j {
            current <<= 1;
            if g.has_edge(i, j) {
                current |= 1;
            }
            have += 1;
            if have == 6 {
                out.push(63 + current);
                current = 0;
                have = 0;
            }
        }
    }
    if have > 0 {
        current <<= 6 - have;
        out.push(63 + current);
    }
    String::from_utf8(out).unwrap()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AdjacencyTextError {
    #[error("missing vertex count line")]
    MissingCount,
    #[error("line {0}: malformed entry {1:?}")]
    Malformed(usize, String),
    #[error("line {0}: {1}")]
    Graph(usize, GraphError),
}

/// Parses the adjacency-list text format: first line the vertex count, then
/// one `u v` pair per line.
pub fn from_adjacency_text(s: &str) -> Result<Graph, AdjacencyTextError> {
    let mut lines = s.lines().enumerate();
    let (_, first) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(AdjacencyTextError::MissingCount)?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| AdjacencyTextError::Malformed(1, first.to_string()))?;
    let mut g = Graph::new(n);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut it = t.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => {
                let u: usize = a
                    .parse()
                    .map_err(|_| AdjacencyTextError::Malformed(line_no, t.to_string()))?;
                let v: usize = b
                    .parse()
                    .map_err(|_| AdjacencyTextError::Malformed(line_no, t.to_string()))?;
                (u, v)
            }
            _ => return Err(AdjacencyTextError::Malformed(line_no, t.to_string())),
        };
        g.add_edge(u, v).map_err(|e| AdjacencyTextError::Graph(line_no, e))?;
    }
    Ok(g)
}

pub fn to_adjacency_text(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", u, v));
    }
    s
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NamedGraphError {
    #[error("unknown graph name {0:?}")]
    Unknown(String),
    #[error("{0} takes no size parameter")]
    UnexpectedSize(String),
    #[error("{0} requires a size parameter, e.g. {0}:5")]
    MissingSize(String),
    #[error("bad size {1:?} for {0}")]
    BadSize(String, String),
    #[error("size {1} too small for {0} (minimum {2})")]
    SizeTooSmall(String, usize, usize),
}

/// Builds a fixed named graph from a `name` or `name:size` specifier.
///
/// Known names: `k4`, `cube`, `petersen`, `dodecahedron`, and the families
/// `cycle:n` (n >= 3), `path:n` (n >= 1), `complete:n` (n >= 1).
pub fn named_graph(label: &str) -> Result<Graph, NamedGraphError> {
    let (name, size) = match label.split_once(':') {
        Some((a, b)) => (a.trim().to_ascii_lowercase(), Some(b.trim())),
        None => (label.trim().to_ascii_lowercase(), None),
    };
    let parse_size = |min: usize| -> Result<usize, NamedGraphError> {
        let raw = size.ok_or_else(|| NamedGraphError::MissingSize(name.clone()))?;
        let k: usize = raw
            .parse()
            .map_err(|_| NamedGraphError::BadSize(name.clone(), raw.to_string()))?;
        if k < min {
            return Err(NamedGraphError::SizeTooSmall(name.clone(), k, min));
        }
        Ok(k)
    };
    let fixed = |g: Graph| -> Result<Graph, NamedGraphError> {
        if size.is_some() {
            Err(NamedGraphError::UnexpectedSize(name.clone()))
        } else {
            Ok(g)
        }
    };
    match name.as_str() {
        "k4" => fixed(complete(4)),
        "cube" => fixed(cube()),
        "petersen" => fixed(petersen()),
        "dodecahedron" => fixed(dodecahedron()),
        "cycle" => Ok(cycle(parse_size(3)?)),
        "path" => Ok(path(parse_size(1)?)),
        "complete" => Ok(complete(parse_size(1)?)),
        _ => Err(NamedGraphError::Unknown(name)),
    }
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// The 3-cube: vertices are bit strings, edges flip one bit.
pub fn cube() -> Graph {
    let mut edges = Vec::new();
    for u in 0..8usize {
        for b in 0..3 {
            let v = u ^ (1 << b);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(8, &edges).unwrap()
}

/// Petersen graph: outer 5-cycle 0-4, inner pentagram 5-9, spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).unwrap()
}

/// Dodecahedral graph as the generalized Petersen graph GP(10, 2):
/// outer 10-cycle 0-9, inner vertices 10-19 joined at step 2, spokes.
pub fn dodecahedron() -> Graph {
    let mut edges = Vec::new();
    for i in 0..10 {
        edges.push((i, (i + 1) % 10));
        edges.push((i, 10 + i));
        edges.push((10 + i, 10 + (i + 2) % 10));
    }
    Graph::from_edges(20, &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn k4_from_graph6() {
        let g = from_graph6("C~").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);
        for u in 0..4 {
            for v in u + 1..4 {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn single_vertex_graph6() {
        let g = from_graph6("@").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(to_graph6(&g), "@");
    }

    #[test]
    fn zero_vertex_graph6() {
        let g = from_graph6("?").unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(to_graph6(&g), "?");
    }

    #[test]
    fn graph6_round_trip_named() {
        for g in [complete(4), cube(), petersen(), dodecahedron(), cycle(5), path(7)] {
            let s = to_graph6(&g);
            let h = from_graph6(&s).unwrap();
            assert_eq!(g, h);
            assert_eq!(to_graph6(&h), s);
        }
    }

    #[test]
    fn graph6_large_header_round_trip() {
        let g = cycle(100);
        let s = to_graph6(&g);
        assert_eq!(s.as_bytes()[0], 126);
        let h = from_graph6(&s).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn graph6_errors_name_offsets() {
        assert_eq!(from_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(
            from_graph6("C"),
            Err(Graph6Error::Truncated { expected: 2, found: 1 })
        );
        assert!(matches!(
            from_graph6("C\x1f"),
            Err(Graph6Error::InvalidByte { offset: 1, .. })
        ));
        assert_eq!(from_graph6("C~~"), Err(Graph6Error::TrailingData(2)));
        // D has 10 upper-triangle bits; nonzero padding in the last sextet
        let bad = format!("D{}{}", char::from(63 + 63), char::from(63 + 1));
        assert!(matches!(
            from_graph6(&bad),
            Err(Graph6Error::InvalidByte { offset: 2, .. })
        ));
    }

    #[test]
    fn adjacency_text_round_trip() {
        let g = petersen();
        let text = to_adjacency_text(&g);
        let h = from_adjacency_text(&text).unwrap();
        assert_eq!(g, h);
        assert!(text.starts_with("10\n"));
    }

    #[test]
    fn adjacency_text_errors() {
        assert!(matches!(
            from_adjacency_text(""),
            Err(AdjacencyTextError::MissingCount)
        ));
        assert!(matches!(
            from_adjacency_text("3\n0 0\n"),
            Err(AdjacencyTextError::Graph(2, GraphError::SelfLoop(0)))
        ));
        assert!(matches!(
            from_adjacency_text("3\n0 1\n1 0\n"),
            Err(AdjacencyTextError::Graph(3, GraphError::DuplicateEdge(0, 1)))
        ));
        assert!(matches!(
            from_adjacency_text("2\n0 5\n"),
            Err(AdjacencyTextError::Graph(2, GraphError::OutOfRange(5, 2)))
        ));
    }

    #[test]
    fn named_graph_shapes() {
        let cube = named_graph("cube").unwrap();
        assert_eq!((cube.n(), cube.edge_count()), (8, 12));
        assert!((0..8).all(|v| cube.degree(v) == 3));
        assert_eq!(cube.girth(), Some(4));

        let dod = named_graph("dodecahedron").unwrap();
        assert_eq!((dod.n(), dod.edge_count()), (20, 30));
        assert!((0..20).all(|v| dod.degree(v) == 3));
        assert_eq!(dod.girth(), Some(5));
        assert!(dod.is_connected());

        let pet = named_graph("petersen").unwrap();
        assert_eq!((pet.n(), pet.edge_count()), (10, 15));
        assert_eq!(pet.girth(), Some(5));

        assert_eq!(named_graph("cycle:5").unwrap().girth(), Some(5));
        assert_eq!(named_graph("path:4").unwrap().girth(), None);
        assert_eq!(named_graph("k4").unwrap().girth(), Some(3));
    }

    #[test]
    fn named_graph_errors() {
        assert!(matches!(named_graph("blorp"), Err(NamedGraphError::Unknown(_))));
        assert!(matches!(named_graph("cycle"), Err(NamedGraphError::MissingSize(_))));
        assert!(matches!(
            named_graph("cycle:2"),
            Err(NamedGraphError::SizeTooSmall(_, 2, 3))
        ));
        assert!(matches!(named_graph("cube:3"), Err(NamedGraphError::UnexpectedSize(_))));
        assert!(matches!(named_graph("cycle:x"), Err(NamedGraphError::BadSize(_, _))));
    }

    #[test]
    fn girth_small_cases() {
        assert_eq!(cycle(3).girth(), Some(3));
        assert_eq!(cycle(9).girth(), Some(9));
        assert_eq!(path(5).girth(), None);
        assert_eq!(complete(5).girth(), Some(3));
        // two cycles sharing a path: girth is the shorter cycle
        let g = Graph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 0)],
        )
        .unwrap();
        assert_eq!(g.girth(), Some(3));
    }

    #[test]
    fn induced_forest_check() {
        let g = cycle(5);
        let all: BTreeSet<usize> = (0..5).collect();
        assert!(!g.is_induced_forest(&all));
        let minus_one: BTreeSet<usize> = (1..5).collect();
        assert!(g.is_induced_forest(&minus_one));
        assert!(g.is_induced_forest(&BTreeSet::new()));
    }

    #[test]
    fn structural_stats() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (3, 5)]).unwrap();
        assert_eq!(g.average_degree(), rat(2, 1));
        // vertex 0 has neighbors of degrees 2, 2, 3
        assert_eq!(g.effective_degree(0), 1);
        assert!(g.is_light(0));
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = cycle(5);
        let keep: BTreeSet<usize> = [0, 2, 3].into_iter().collect();
        let (h, ids) = g.induced_subgraph(&keep);
        assert_eq!(ids, vec![0, 2, 3]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), vec![(1, 2)]);
        let (d, ids2) = g.delete_vertices(&[1, 4].into_iter().collect());
        assert_eq!(ids2, vec![0, 2, 3]);
        assert_eq!(d, h);
    }

    #[test]
    fn components_listing() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
