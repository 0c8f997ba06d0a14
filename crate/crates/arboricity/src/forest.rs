//! Exact maximum-weight induced forest and independent set search, plus
//! explicit enumeration of induced forests on small graphs.
//!
//! The branch-and-bound runs two passes. The first pass finds the optimal
//! weight quickly by branching on vertices in descending weight order. The
//! second pass re-searches in ascending vertex order and returns the first
//! set achieving the optimum, which makes the reported witness the
//! lexicographically smallest one over positive-weight vertices.

use crate::graph::Graph;
use crate::rational::Rational;
use num::Zero;
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph on {n} vertices exceeds the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("vertex {vertex} has negative weight {weight}")]
    NegativeWeight { vertex: usize, weight: Rational },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub set: BTreeSet<usize>,
    pub weight: Rational,
}

/// Union-find without path compression so unions can be rolled back.
struct RollbackUf {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<usize>,
}

impl RollbackUf {
    fn new(n: usize) -> Self {
        RollbackUf { parent: (0..n).collect(), size: vec![1; n], log: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both endpoints already share a root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (child, root) = if self.size[ra] < self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root;
        self.size[root] += self.size[child];
        self.log.push(child);
        true
    }

    fn snapshot(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, to: usize) {
        while self.log.len() > to {
            let child = self.log.pop().unwrap();
            let root = self.parent[child];
            self.size[root] -= self.size[child];
            self.parent[child] = child;
        }
    }
}

fn check_weights(g: &Graph, weights: &[Rational]) -> Result<(), OracleError> {
    if weights.len() != g.n() {
        return Err(OracleError::WeightCount { expected: g.n(), got: weights.len() });
    }
    for (v, w) in weights.iter().enumerate() {
        if w < &Rational::zero() {
            return Err(OracleError::NegativeWeight { vertex: v, weight: w.clone() });
        }
    }
    Ok(())
}

/// Shared search over a feasibility structure. `Forest` keeps the chosen set
/// acyclic; `Independent` keeps it edgeless.
#[derive(Clone, Copy)]
enum Structure {
    Forest,
    Independent,
}

struct Search<'a> {
    g: &'a Graph,
    weights: &'a [Rational],
    order: Vec<usize>,
    /// suffix[i] = total weight of order[i..]
    suffix: Vec<Rational>,
    structure: Structure,
    uf: RollbackUf,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    best: Rational,
    target: Option<Rational>,
    witness: Option<Vec<usize>>,
}

impl Search<'_> {
    fn try_include(&mut self, v: usize) -> Option<usize> {
        match self.structure {
            Structure::Independent => {
                if self.g.neighbors(v).any(|u| self.in_set[u]) {
                    None
                } else {
                    Some(0)
                }
            }
            Structure::Forest => {
                let snap = self.uf.snapshot();
                for u in self.g.neighbors(v) {
                    if self.in_set[u] && !self.uf.union(v, u) {
                        self.uf.rollback(snap);
                        return None;
                    }
                }
                Some(snap)
            }
        }
    }

    fn dfs(&mut self, i: usize, current: Rational) {
        if self.witness.is_some() {
            return;
        }
        if let Some(t) = &self.target {
            if &current == t {
                self.witness = Some(self.chosen.clone());
                return;
            }
        }
        if i == self.order.len() {
            if current > self.best {
                self.best = current;
            }
            return;
        }
        let bound = &current + &self.suffix[i];
        match &self.target {
            Some(t) => {
                if &bound < t {
                    return;
                }
            }
            None => {
                if bound <= self.best {
                    return;
                }
            }
        }
        let v = self.order[i];
        if let Some(snap) = self.try_include(v) {
            self.chosen.push(v);
            self.in_set[v] = true;
            let w = &current + &self.weights[v];
            self.dfs(i + 1, w);
            self.in_set[v] = false;
            self.chosen.pop();
            if matches!(self.structure, Structure::Forest) {
                self.uf.rollback(snap);
            }
        }
        self.dfs(i + 1, current);
    }
}

fn solve(g: &Graph, weights: &[Rational], structure: Structure) -> Result<OracleResult, OracleError> {
    check_weights(g, weights)?;
    let n = g.n();

    // Forests and independent sets are down-closed, so an optimal set never
    // needs a zero-weight vertex, and the search decomposes over connected
    // components of the positive-weight induced subgraph.
    let positive = |v: usize| weights[v] > Rational::zero();
    let mut seen = vec![false; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for s in (0..n).filter(|&v| positive(v)) {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut members = vec![s];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if positive(u) && !seen[u] {
                    seen[u] = true;
                    members.push(u);
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    let suffix_of = |order: &[usize]| {
        let mut suffix = vec![Rational::zero(); order.len() + 1];
        for i in (0..order.len()).rev() {
            suffix[i] = &suffix[i + 1] + &weights[order[i]];
        }
        suffix
    };

    let mut total = Rational::zero();
    let mut set = BTreeSet::new();
    for members in &components {
        // Pass 1: optimal value, heaviest vertices first.
        let mut order = members.clone();
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
        let mut pass1 = Search {
            g,
            weights,
            suffix: suffix_of(&order),
            order,
            structure,
            uf: RollbackUf::new(n),
            chosen: Vec::new(),
            in_set: vec![false; n],
            best: Rational::zero(),
            target: None,
            witness: None,
        };
        pass1.dfs(0, Rational::zero());
        let optimum = pass1.best;

        // Pass 2: lexicographically smallest witness, found as the first
        // optimum in ascending-order include-first search. Per-component
        // greedy decisions agree with a global ascending sweep because
        // feasibility never couples components.
        let mut pass2 = Search {
            g,
            weights,
            suffix: suffix_of(members),
            order: members.clone(),
            structure,
            uf: RollbackUf::new(n),
            chosen: Vec::new(),
            in_set: vec![false; n],
            best: Rational::zero(),
            target: Some(optimum.clone()),
            witness: None,
        };
        pass2.dfs(0, Rational::zero());
        set.extend(pass2.witness.expect("pass 1 optimum must be reachable"));
        total += optimum;
    }
    Ok(OracleResult { set, weight: total })
}

/// Maximum-weight induced forest; weights must be nonnegative. Zero-weight
/// vertices are excluded from the returned set.
pub fn max_weight_induced_forest(g: &Graph, weights: &[Rational]) -> Result<OracleResult, OracleError> {
    solve(g, weights, Structure::Forest)
}

/// Maximum-weight independent set; same conventions as the forest search.
pub fn max_weight_independent_set(g: &Graph, weights: &[Rational]) -> Result<OracleResult, OracleError> {
    solve(g, weights, Structure::Independent)
}

pub const FOREST_ENUMERATION_LIMIT: usize = 20;

/// Every vertex subset that induces a forest, the empty set included, in
/// ascending lexicographic order. With `maximal_only` the list is filtered
/// down to sets no superset of which induces a forest.
pub fn enumerate_induced_forests(g: &Graph, maximal_only: bool) -> Result<Vec<BTreeSet<usize>>, OracleError> {
    let n = g.n();
    if n > FOREST_ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge { n, limit: FOREST_ENUMERATION_LIMIT });
    }
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    let mut uf = RollbackUf::new(n);
    let mut in_set = vec![false; n];
    let mut chosen: Vec<usize> = Vec::new();

    fn rec(
        g: &Graph,
        v: usize,
        uf: &mut RollbackUf,
        in_set: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if v == g.n() {
            out.push(chosen.iter().copied().collect());
            return;
        }
        // include first so supersets of a prefix precede it being skipped
        let snap = uf.snapshot();
        let mut ok = true;
        for u in g.neighbors(v) {
            if in_set[u] && !uf.union(v, u) {
                ok = false;
                break;
            }
        }
        if ok {
            in_set[v] = true;
            chosen.push(v);
            rec(g, v + 1, uf, in_set, chosen, out);
            chosen.pop();
            in_set[v] = false;
        }
        uf.rollback(snap);
        rec(g, v + 1, uf, in_set, chosen, out);
    }
    rec(g, 0, &mut uf, &mut in_set, &mut chosen, &mut out);
    out.sort();
    if maximal_only {
        out.retain(|s| {
            (0..n).all(|v| {
                if s.contains(&v) {
                    return true;
                }
                let mut with: BTreeSet<usize> = s.clone();
                with.insert(v);
                !g.is_induced_forest(&with)
            })
        });
    }
    Ok(out)
}

/// Greedy maximal induced forest: scan vertices in id order, keep those that
/// preserve acyclicity. Deterministic seed for the cover solvers.
pub fn greedy_maximal_forest(g: &Graph) -> BTreeSet<usize> {
    greedy_maximal_forest_from(g, 0)
}

/// Greedy maximal induced forest scanning vertex ids from `start` onward
/// and wrapping around; different starts give diverse forests.
pub fn greedy_maximal_forest_from(g: &Graph, start: usize) -> BTreeSet<usize> {
    let n = g.n();
    let mut uf = RollbackUf::new(n);
    let mut in_set = vec![false; n];
    let mut set = BTreeSet::new();
    for v in (0..n).map(|i| (start + i) % n.max(1)) {
        let snap = uf.snapshot();
        let mut ok = true;
        for u in g.neighbors(v) {
            if in_set[u] && !uf.union(v, u) {
                ok = false;
                break;
            }
        }
        if ok {
            in_set[v] = true;
            set.insert(v);
        } else {
            uf.rollback(snap);
        }
    }
    set
}

/// Greedy maximal independent set in id order.
pub fn greedy_maximal_independent_set(g: &Graph) -> BTreeSet<usize> {
    let mut in_set = vec![false; g.n()];
    let mut set = BTreeSet::new();
    for v in 0..g.n() {
        if g.neighbors(v).all(|u| !in_set[u]) {
            in_set[v] = true;
            set.insert(v);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, named_graph, petersen};
    use crate::rational::{int, rat};

    fn unit_weights(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn forest_on_k4_has_two_vertices() {
        let g = named_graph("k4").unwrap();
        let r = max_weight_induced_forest(&g, &unit_weights(4)).unwrap();
        assert_eq!(r.weight, int(2));
        assert_eq!(r.set, BTreeSet::from([0, 1]));
    }

    #[test]
    fn forest_on_cycle_drops_one_vertex() {
        let g = cycle(7);
        let r = max_weight_induced_forest(&g, &unit_weights(7)).unwrap();
        assert_eq!(r.weight, int(6));
    }

    #[test]
    fn independent_set_on_petersen_is_four() {
        let g = petersen();
        let r = max_weight_independent_set(&g, &unit_weights(10)).unwrap();
        assert_eq!(r.weight, int(4));
        for &u in &r.set {
            for &v in &r.set {
                assert!(u == v || !g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn weighted_search_prefers_heavy_vertex() {
        // triangle with one heavy vertex: best forest is the heavy vertex
        // plus one light one
        let g = cycle(3);
        let w = vec![int(5), int(1), int(1)];
        let r = max_weight_induced_forest(&g, &w).unwrap();
        assert_eq!(r.weight, int(6));
        assert_eq!(r.set, BTreeSet::from([0, 1]));
    }

    #[test]
    fn zero_weight_vertices_are_left_out() {
        let g = Graph::new(3);
        let w = vec![int(0), int(2), int(0)];
        let r = max_weight_induced_forest(&g, &w).unwrap();
        assert_eq!(r.set, BTreeSet::from([1]));
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // path 0-1-2 with equal weights: {0,1,2} is a forest, so the whole
        // set wins; on a triangle the first optimal pair is {0,1}
        let g = cycle(3);
        let r = max_weight_induced_forest(&g, &unit_weights(3)).unwrap();
        assert_eq!(r.set, BTreeSet::from([0, 1]));
        let r = max_weight_independent_set(&g, &unit_weights(3)).unwrap();
        assert_eq!(r.set, BTreeSet::from([0]));
    }

    #[test]
    fn fractional_weights_are_exact() {
        let g = cycle(5);
        let w = vec![rat(1, 3), rat(1, 3), rat(1, 3), rat(1, 2), rat(1, 2)];
        let r = max_weight_independent_set(&g, &w).unwrap();
        // any independent pair hits at most one of the two 1/2 vertices
        assert_eq!(r.weight, rat(5, 6));
    }

    #[test]
    fn negative_weight_rejected() {
        let g = Graph::new(2);
        let err = max_weight_induced_forest(&g, &[int(1), rat(-1, 2)]).unwrap_err();
        assert_eq!(err, OracleError::NegativeWeight { vertex: 1, weight: rat(-1, 2) });
    }

    #[test]
    fn enumeration_counts_on_small_graphs() {
        // K3: all subsets except the full one induce forests
        let g = cycle(3);
        let all = enumerate_induced_forests(&g, false).unwrap();
        assert_eq!(all.len(), 7);
        let maximal = enumerate_induced_forests(&g, true).unwrap();
        assert_eq!(maximal.len(), 3);
        for s in &maximal {
            assert_eq!(s.len(), 2);
        }
    }

    #[test]
    fn enumeration_agrees_with_oracle_on_small_graphs() {
        for label in ["k4", "cube", "cycle:6", "petersen"] {
            let g = named_graph(label).unwrap();
            let best_by_enum = enumerate_induced_forests(&g, false)
                .unwrap()
                .iter()
                .map(|s| s.len())
                .max()
                .unwrap();
            let r = max_weight_induced_forest(&g, &unit_weights(g.n())).unwrap();
            assert_eq!(r.weight, int(best_by_enum as i64), "{label}");
        }
    }

    #[test]
    fn enumeration_guard_rejects_large_graphs() {
        let g = Graph::new(21);
        assert_eq!(
            enumerate_induced_forests(&g, false).unwrap_err(),
            OracleError::TooLarge { n: 21, limit: 20 }
        );
    }

    #[test]
    fn greedy_seeds_are_feasible_and_maximal() {
        let g = petersen();
        let f = greedy_maximal_forest(&g);
        assert!(g.is_induced_forest(&f));
        for v in 0..10 {
            if !f.contains(&v) {
                let mut with = f.clone();
                with.insert(v);
                assert!(!g.is_induced_forest(&with));
            }
        }
        let s = greedy_maximal_independent_set(&g);
        for &u in &s {
            for &v in &s {
                assert!(u == v || !g.has_edge(u, v));
            }
        }
    }
}
