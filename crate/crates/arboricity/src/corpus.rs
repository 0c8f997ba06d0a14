//! Small-graph corpora: isomorph-free enumeration by canonical augmentation,
//! plus seeded random graphs for stress suites.
//!
//! Canonical forms are the lexicographically smallest upper-triangle bit
//! strings over all vertex relabelings, packed into a `u64` (which caps the
//! enumerator at 11 vertices). The enumeration adds one vertex at a time to
//! every representative of the previous level and deduplicates by canonical
//! key, which visits every isomorphism class exactly once.

use crate::graph::Graph;
use rand::prelude::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Largest vertex count the canonical key fits: C(11,2) = 55 bits.
pub const ENUMERATION_LIMIT: usize = 11;

fn adjacency_masks(g: &Graph) -> Vec<u16> {
    let mut adj = vec![0u16; g.n()];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Lexicographically smallest upper-triangle encoding over all relabelings.
/// Bit order: pair (i, j), i < j, in column-major order (0,1), (0,2), (1,2),
/// (0,3), ... with earlier pairs in higher bits.
pub fn canonical_key(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= ENUMERATION_LIMIT, "canonical_key supports up to {ENUMERATION_LIMIT} vertices");
    if n < 2 {
        return 0;
    }
    let adj = adjacency_masks(g);
    let total_bits = n * (n - 1) / 2;
    let best: u64 = u64::MAX >> (64 - total_bits);

    // Depth-first search over partial relabelings. The accumulated prefix is
    // compared against the incumbent after every placed vertex, which prunes
    // almost all of the factorial search on sparse graphs.
    struct Search<'a> {
        adj: &'a [u16],
        n: usize,
        total_bits: usize,
        best: u64,
    }
    impl Search<'_> {
        fn go(&mut self, placed: &mut Vec<usize>, used: u16, bits: u64, nbits: usize) {
            if placed.len() == self.n {
                if bits < self.best {
                    self.best = bits;
                }
                return;
            }
            let d = placed.len();
            // column value of candidate u = adjacency bits against placed prefix
            let mut cands: Vec<(u64, usize)> = (0..self.n)
                .filter(|u| used & (1 << u) == 0)
                .map(|u| {
                    let mut col = 0u64;
                    for (k, &p) in placed.iter().enumerate() {
                        if self.adj[u] & (1 << p) != 0 {
                            col |= 1 << (d - 1 - k);
                        }
                    }
                    (col, u)
                })
                .collect();
            cands.sort_unstable();
            for (col, u) in cands {
                let nb = nbits + d;
                let next = (bits << d) | col;
                // prefix comparison against the incumbent's leading bits
                if next > self.best >> (self.total_bits - nb) {
                    continue;
                }
                placed.push(u);
                self.go(placed, used | (1 << u), next, nb);
                placed.pop();
            }
        }
    }
    let mut s = Search { adj: &adj, n, total_bits, best };
    for v in 0..n {
        let mut placed = vec![v];
        s.go(&mut placed, 1 << v, 0, 0);
    }
    s.best
}

/// Rebuilds the canonically labeled graph from its key.
pub fn graph_from_key(n: usize, key: u64) -> Graph {
    let mut g = Graph::new(n);
    let total_bits = n.saturating_sub(1) * n / 2;
    let mut bit = total_bits;
    for j in 1..n {
        for i in 0..j {
            bit -= 1;
            if (key >> bit) & 1 == 1 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// All graphs up to isomorphism, indexed by vertex count: `levels[n]` holds
/// one canonically labeled representative per class with at most `max_edges`
/// edges, sorted by canonical key.
pub fn graph_levels(max_n: usize, max_edges: Option<usize>) -> Vec<Vec<Graph>> {
    assert!(max_n <= ENUMERATION_LIMIT);
    let cap = max_edges.unwrap_or(usize::MAX);
    let mut levels: Vec<Vec<Graph>> = vec![Vec::new(); max_n + 1];
    if max_n == 0 {
        return levels;
    }
    levels[1] = vec![Graph::new(1)];
    for n in 2..=max_n {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut keys: Vec<u64> = Vec::new();
        for h in &levels[n - 1] {
            let hm = h.edge_count();
            let h_edges = h.edges();
            for s in 0u32..(1 << (n - 1)) {
                if hm + s.count_ones() as usize > cap {
                    continue;
                }
                let mut g = Graph::new(n);
                for &(u, v) in &h_edges {
                    g.add_edge(u, v).unwrap();
                }
                for b in 0..n - 1 {
                    if s & (1 << b) != 0 {
                        g.add_edge(b, n - 1).unwrap();
                    }
                }
                let key = canonical_key(&g);
                if seen.insert(key) {
                    keys.push(key);
                }
            }
        }
        keys.sort_unstable();
        levels[n] = keys.into_iter().map(|k| graph_from_key(n, k)).collect();
    }
    levels
}

/// Connected graphs on exactly `n` vertices, up to isomorphism.
pub fn connected_graphs(n: usize, max_edges: Option<usize>) -> Vec<Graph> {
    graph_levels(n, max_edges)
        .swap_remove(n)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random graph with exactly `m` edges (capped at the maximum).
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    let m = m.min(pairs.len());
    pairs.shuffle(rng);
    Graph::from_edges(n, &pairs[..m]).unwrap()
}

/// Random graph with average degree strictly below 10/3 (i.e. 3m < 5n).
pub fn random_sparse_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    assert!(n > 0);
    let cap = (5 * n - 1) / 3;
    let m = rng.gen_range(0..=cap.min(n * (n - 1) / 2));
    random_graph(rng, n, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force canonical key: minimum over all permutations.
    fn naive_key(g: &Graph) -> u64 {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        permute(&mut perm, 0, &mut |p| {
            let mut bits = 0u64;
            for j in 1..n {
                for i in 0..j {
                    bits <<= 1;
                    if g.has_edge(p[i], p[j]) {
                        bits |= 1;
                    }
                }
            }
            if bits < best {
                best = bits;
            }
        });
        if n < 2 {
            0
        } else {
            best
        }
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn canonical_key_matches_naive_search() {
        // every labeled graph on up to 5 vertices
        for n in 1..=5usize {
            let bits = n * (n - 1) / 2;
            for code in 0u64..(1 << bits) {
                let g = graph_from_key(n, code);
                assert_eq!(canonical_key(&g), naive_key(&g), "n={n} code={code}");
            }
        }
    }

    #[test]
    fn level_counts_match_known_values() {
        let levels = graph_levels(6, None);
        let all: Vec<usize> = (1..=6).map(|n| levels[n].len()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6)
            .map(|n| levels[n].iter().filter(|g| g.is_connected()).count())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn edge_cap_agrees_with_filtering() {
        let capped = graph_levels(6, Some(7));
        let full = graph_levels(6, None);
        for n in 1..=6 {
            let filtered: Vec<u64> = full[n]
                .iter()
                .filter(|g| g.edge_count() <= 7)
                .map(canonical_key)
                .collect();
            let got: Vec<u64> = capped[n].iter().map(canonical_key).collect();
            assert_eq!(got, filtered, "n={n}");
        }
    }

    #[test]
    fn representatives_are_canonically_labeled() {
        for g in &graph_levels(5, None)[5] {
            assert_eq!(graph_from_key(5, canonical_key(g)), *g);
        }
    }

    #[test]
    fn random_graphs_are_deterministic_per_seed() {
        let mut r1 = seeded_rng(42);
        let mut r2 = seeded_rng(42);
        for _ in 0..5 {
            let a = random_graph(&mut r1, 9, 11);
            let b = random_graph(&mut r2, 9, 11);
            assert_eq!(a, b);
            assert_eq!(a.edge_count(), 11);
        }
    }

    #[test]
    fn sparse_random_graphs_are_sparse() {
        let mut rng = seeded_rng(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=40);
            let g = random_sparse_graph(&mut rng, n);
            assert!(3 * 2 * g.edge_count() < 10 * g.n());
        }
    }
}
