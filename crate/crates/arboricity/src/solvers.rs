//! Exact graph invariants built on the LP core and the subset oracles:
//! vertex arboricity, its fractional relaxation, the fractional chromatic
//! number, bounded-size acyclic colorings, and conversions from covers and
//! colorings into interval assignments.

use crate::arborization::{verify, Arborization, VerifyMode, Violation};
use crate::forest::{
    enumerate_induced_forests, greedy_maximal_forest_from, greedy_maximal_independent_set,
    max_weight_independent_set, max_weight_induced_forest,
};
use crate::graph::Graph;
use crate::interval::IntervalSet;
use crate::lp::{
    check_certificate, column_generation, solve_exact, CertificateError, CoverLp, LpError,
    PricedColumn,
};
use crate::rational::Rational;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Optimum of a fractional covering relaxation, together with everything
/// needed to certify it: the positive-weight cover, the dual values, the
/// final pricing bound, and whether a full-enumeration solve agreed.
#[derive(Debug, Clone)]
pub struct FractionalCover {
    pub value: Rational,
    /// columns with positive weight, in master column order
    pub cover: Vec<(BTreeSet<usize>, Rational)>,
    pub dual: Vec<Rational>,
    /// all columns present in the final master LP
    pub columns: Vec<BTreeSet<usize>>,
    /// master LP solves performed by column generation
    pub iterations: usize,
    /// optimum of the last pricing round; at most 1 proves optimality
    pub pricing_bound: Rational,
    /// true when a separate full-enumeration LP reproduced the value
    pub cross_checked: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("optimality certificate failed: {0}")]
    Certificate(#[from] CertificateError),
    #[error("column generation found {generated} but full enumeration found {enumerated}")]
    CrossCheckMismatch { generated: Rational, enumerated: Rational },
}

/// Graphs up to this size get an independent full-enumeration solve.
pub const CROSS_CHECK_LIMIT: usize = 12;

fn dedupe(seeds: Vec<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    let set: BTreeSet<BTreeSet<usize>> = seeds.into_iter().filter(|s| !s.is_empty()).collect();
    set.into_iter().collect()
}

fn solve_fractional_cover(
    g: &Graph,
    seeds: Vec<BTreeSet<usize>>,
    mut pricer: impl FnMut(&[Rational]) -> PricedColumn,
    enumerate: impl Fn(&Graph) -> Vec<BTreeSet<usize>>,
) -> Result<FractionalCover, SolverError> {
    let cg = column_generation(g.n(), dedupe(seeds), &mut pricer)?;
    let lp = CoverLp { n: g.n(), columns: cg.columns.clone() };
    check_certificate(&lp, &cg.result)?;

    let mut cross_checked = false;
    if g.n() <= CROSS_CHECK_LIMIT {
        let full = CoverLp { n: g.n(), columns: enumerate(g) };
        let full_res = solve_exact(&full)?;
        check_certificate(&full, &full_res)?;
        if full_res.value != cg.result.value {
            return Err(SolverError::CrossCheckMismatch {
                generated: cg.result.value,
                enumerated: full_res.value,
            });
        }
        cross_checked = true;
    }

    let cover = cg
        .columns
        .iter()
        .zip(&cg.result.primal)
        .filter(|(_, w)| **w > Rational::zero())
        .map(|(c, w)| (c.clone(), w.clone()))
        .collect();
    Ok(FractionalCover {
        value: cg.result.value,
        cover,
        dual: cg.result.dual,
        columns: cg.columns,
        iterations: cg.iterations,
        pricing_bound: cg.pricing_bound,
        cross_checked,
    })
}

/// Connected pieces of the subgraph induced by `set`, returned only when
/// there are at least two; offering the pieces as separate columns lets the
/// master weight them independently instead of enumerating their products.
fn split_by_component(g: &Graph, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut parts: Vec<BTreeSet<usize>> = Vec::new();
    for &s in set {
        if seen.contains(&s) {
            continue;
        }
        let mut part = BTreeSet::from([s]);
        let mut stack = vec![s];
        seen.insert(s);
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if set.contains(&u) && seen.insert(u) {
                    part.insert(u);
                    stack.push(u);
                }
            }
        }
        parts.push(part);
    }
    if parts.len() > 1 {
        parts
    } else {
        Vec::new()
    }
}

/// Minimum total weight of induced forests covering every vertex once,
/// solved by column generation against the exact max-weight forest oracle.
pub fn fractional_vertex_arboricity(g: &Graph) -> Result<FractionalCover, SolverError> {
    let mut seeds: Vec<BTreeSet<usize>> = (0..g.n()).map(|v| BTreeSet::from([v])).collect();
    for start in 0..g.n() {
        let f = greedy_maximal_forest_from(g, start);
        if !seeds.contains(&f) {
            seeds.push(f);
        }
    }
    solve_fractional_cover(
        g,
        seeds,
        |dual| {
            let r = max_weight_induced_forest(g, dual)
                .expect("duals are nonnegative at master optimality");
            let extras = split_by_component(g, &r.set);
            PricedColumn { set: r.set, weight: r.weight, extras }
        },
        |g| {
            enumerate_induced_forests(g, false)
                .expect("cross-check limit keeps enumeration feasible")
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect()
        },
    )
}

/// Minimum total weight of independent sets covering every vertex once.
pub fn fractional_chromatic_number(g: &Graph) -> Result<FractionalCover, SolverError> {
    let mut seeds: Vec<BTreeSet<usize>> = (0..g.n()).map(|v| BTreeSet::from([v])).collect();
    seeds.push(greedy_maximal_independent_set(g));
    solve_fractional_cover(
        g,
        seeds,
        |dual| {
            let r = max_weight_independent_set(g, dual)
                .expect("duals are nonnegative at master optimality");
            let extras = split_by_component(g, &r.set);
            PricedColumn { set: r.set, weight: r.weight, extras }
        },
        |g| {
            let n = g.n();
            let mut sets = Vec::new();
            for mask in 1u32..(1 << n) {
                let s: BTreeSet<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                let independent =
                    s.iter().all(|&u| g.neighbors(u).all(|v| !s.contains(&v)));
                if independent {
                    sets.push(s);
                }
            }
            sets
        },
    )
}

/// Partition search shared by the coloring solvers. `candidates` yields the
/// vertices in a deterministic saturation-driven order; `fits` decides
/// Placement predicate for the coloring backtracker: may vertex `v` take
/// color `c` given the partial assignment?
type FitsFn = dyn Fn(&Graph, &[Option<usize>], usize, usize) -> bool;

/// whether a vertex may join a color class.
fn color_search(
    g: &Graph,
    k: usize,
    fits: &FitsFn,
) -> Option<Vec<usize>> {
    let n = g.n();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut colors: Vec<Option<usize>> = vec![None; n];

    fn next_vertex(g: &Graph, colors: &[Option<usize>]) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..g.n() {
            if colors[v].is_some() {
                continue;
            }
            let sat: BTreeSet<usize> =
                g.neighbors(v).filter_map(|u| colors[u]).collect();
            let key = (sat.len(), g.degree(v), usize::MAX - v);
            if best.is_none_or(|(s, d, iv)| key > (s, d, iv)) {
                best = Some(key);
            }
        }
        best.map(|(_, _, iv)| usize::MAX - iv)
    }

    fn go(
        g: &Graph,
        k: usize,
        colors: &mut Vec<Option<usize>>,
        used: usize,
        fits: &FitsFn,
    ) -> bool {
        let Some(v) = next_vertex(g, colors) else { return true };
        // allow at most one brand-new color to break class symmetry
        let limit = k.min(used + 1);
        for c in 0..limit {
            if fits(g, colors, v, c) {
                colors[v] = Some(c);
                if go(g, k, colors, used.max(c + 1), fits) {
                    return true;
                }
                colors[v] = None;
            }
        }
        false
    }

    if go(g, k, &mut colors, 0, fits) {
        Some(colors.into_iter().map(|c| c.unwrap()).collect())
    } else {
        None
    }
}

/// Would class `c` still induce a forest after adding `v`?
fn forest_fit(g: &Graph, colors: &[Option<usize>], v: usize, c: usize) -> bool {
    let mut class: BTreeSet<usize> =
        (0..g.n()).filter(|&u| colors[u] == Some(c)).collect();
    class.insert(v);
    g.is_induced_forest(&class)
}

/// Minimum number of classes in a partition of the vertices into induced
/// forests, with one witness partition.
pub fn vertex_arboricity(g: &Graph) -> (usize, Vec<usize>) {
    if g.n() == 0 {
        return (0, Vec::new());
    }
    for k in 1..=g.n() {
        if let Some(c) = color_search(g, k, &forest_fit) {
            return (k, c);
        }
    }
    unreachable!("singleton classes always work")
}

/// Proper coloring with every two classes inducing a forest, if one with at
/// most `k` colors exists.
pub fn acyclic_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let fits = |g: &Graph, colors: &[Option<usize>], v: usize, c: usize| -> bool {
        if g.neighbors(v).any(|u| colors[u] == Some(c)) {
            return false;
        }
        // a new cycle in classes {c, c'} would pass through v, i.e. two
        // neighbors of v colored c' in one component of the {c, c'} subgraph
        let palette: BTreeSet<usize> = colors.iter().flatten().copied().collect();
        for &other in palette.iter().filter(|&&x| x != c) {
            let pair: BTreeSet<usize> = (0..g.n())
                .filter(|&u| colors[u] == Some(c) || colors[u] == Some(other))
                .collect();
            let mut hits: BTreeSet<usize> = BTreeSet::new();
            let mut again = false;
            for u in g.neighbors(v) {
                if colors[u] == Some(other) {
                    hits.insert(u);
                    again = hits.len() >= 2;
                }
            }
            if !again {
                continue;
            }
            // component check among the hit neighbors
            let comps = component_map(g, &pair);
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for &u in &hits {
                if !seen.insert(comps[&u]) {
                    return false;
                }
            }
        }
        true
    };
    color_search(g, k, &fits)
}

fn component_map(g: &Graph, members: &BTreeSet<usize>) -> BTreeMap<usize, usize> {
    let mut label = BTreeMap::new();
    let mut next = 0;
    for &root in members {
        if label.contains_key(&root) {
            continue;
        }
        let mut stack = vec![root];
        label.insert(root, next);
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if members.contains(&w) && !label.contains_key(&w) {
                    label.insert(w, next);
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// Checks that a coloring is proper and every two classes induce a forest.
pub fn is_acyclic_coloring(g: &Graph, colors: &[usize]) -> bool {
    if colors.len() != g.n() {
        return false;
    }
    for (u, v) in g.edges() {
        if colors[u] == colors[v] {
            return false;
        }
    }
    let palette: BTreeSet<usize> = colors.iter().copied().collect();
    for &a in &palette {
        for &b in palette.iter().filter(|&&b| b > a) {
            let pair: BTreeSet<usize> =
                (0..g.n()).filter(|&v| colors[v] == a || colors[v] == b).collect();
            if !g.is_induced_forest(&pair) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("coloring has {got} entries for {expected} vertices")]
    ColoringLength { expected: usize, got: usize },
    #[error("color {color} out of range for a 5-coloring")]
    ColorOutOfRange { color: usize },
    #[error("coloring is not acyclic")]
    NotAcyclic,
    #[error("cover set {index} does not induce a forest")]
    NotAForest { index: usize },
    #[error("cover weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("vertex {vertex} is covered to {total} < 1")]
    Uncovered { vertex: usize, total: Rational },
    #[error("conversion output fails verification: {0}")]
    Invalid(#[from] Violation),
}

/// The five fixed interval classes of total width 5/2 used by
/// [`arborization_from_acyclic5`]: every point of [0, 5/2) lies in exactly
/// two of them.
pub fn five_class_table() -> [IntervalSet; 5] {
    let h = |p: i64, q: i64| Rational::new(p.into(), q.into());
    [
        IntervalSet::interval(&h(0, 1), &h(1, 1)),
        IntervalSet::interval(&h(1, 1), &h(2, 1)),
        IntervalSet::from_pairs(vec![(h(2, 1), h(5, 2)), (h(0, 1), h(1, 2))]),
        IntervalSet::interval(&h(1, 2), &h(3, 2)),
        IntervalSet::interval(&h(3, 2), &h(5, 2)),
    ]
}

/// Turns an acyclic 5-coloring into a verified interval assignment of width
/// 5/2: each color class receives a fixed unit-measure interval set, chosen
/// so every level is covered by exactly two classes.
pub fn arborization_from_acyclic5(g: &Graph, colors: &[usize]) -> Result<Arborization, ConvertError> {
    if colors.len() != g.n() {
        return Err(ConvertError::ColoringLength { expected: g.n(), got: colors.len() });
    }
    if let Some(&c) = colors.iter().find(|&&c| c >= 5) {
        return Err(ConvertError::ColorOutOfRange { color: c });
    }
    if !is_acyclic_coloring(g, colors) {
        return Err(ConvertError::NotAcyclic);
    }
    let table = five_class_table();
    let phi: Arborization =
        (0..g.n()).map(|v| (v, table[colors[v]].clone())).collect();
    let width = Rational::new(5.into(), 2.into());
    verify(g, &phi, VerifyMode::Width(&width))?;
    Ok(phi)
}

/// Lays the sets of a fractional forest cover side by side on the line and
/// assigns each vertex the union of the segments of the sets containing it,
/// trimmed to measure exactly one. Returns the assignment and its width
/// (the total cover weight).
pub fn arborization_from_cover(
    g: &Graph,
    cover: &[(BTreeSet<usize>, Rational)],
) -> Result<(Arborization, Rational), ConvertError> {
    for (i, (set, w)) in cover.iter().enumerate() {
        if w <= &Rational::zero() {
            return Err(ConvertError::NonPositiveWeight { index: i });
        }
        if !g.is_induced_forest(set) {
            return Err(ConvertError::NotAForest { index: i });
        }
    }
    let mut offsets = Vec::with_capacity(cover.len());
    let mut acc = Rational::zero();
    for (_, w) in cover {
        offsets.push(acc.clone());
        acc = &acc + w;
    }
    let width = acc;
    let mut phi = Arborization::new();
    for v in 0..g.n() {
        let mut s = IntervalSet::empty();
        let mut total = Rational::zero();
        for ((set, w), off) in cover.iter().zip(&offsets) {
            if set.contains(&v) {
                s = s.union(&IntervalSet::interval(off, &(off + w)));
                total = &total + w;
            }
        }
        if total < Rational::one() {
            return Err(ConvertError::Uncovered { vertex: v, total });
        }
        phi.insert(v, s);
    }
    let phi = phi.trim_to_unit().map_err(ConvertError::Invalid)?;
    verify(g, &phi, VerifyMode::Width(&width))?;
    Ok((phi, width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cube, cycle, dodecahedron, named_graph, petersen};
    use crate::interval::atoms;
    use crate::rational::{int, rat};

    #[test]
    fn fractional_arboricity_of_k4() {
        let r = fractional_vertex_arboricity(&named_graph("k4").unwrap()).unwrap();
        assert_eq!(r.value, int(2));
        assert!(r.cross_checked);
        assert!(r.pricing_bound <= int(1));
    }

    #[test]
    fn fractional_arboricity_of_the_cube() {
        let r = fractional_vertex_arboricity(&cube()).unwrap();
        assert_eq!(r.value, rat(8, 5));
        assert!(r.cross_checked);
    }

    #[test]
    fn fractional_arboricity_of_a_five_cycle() {
        let r = fractional_vertex_arboricity(&cycle(5)).unwrap();
        assert_eq!(r.value, rat(5, 4));
    }

    #[test]
    fn fractional_arboricity_of_petersen() {
        let r = fractional_vertex_arboricity(&petersen()).unwrap();
        assert_eq!(r.value, rat(10, 7));
        assert!(r.cross_checked);
    }

    #[test]
    fn fractional_chromatic_number_of_odd_cycles() {
        let r = fractional_chromatic_number(&cycle(5)).unwrap();
        assert_eq!(r.value, rat(5, 2));
        let r = fractional_chromatic_number(&cycle(7)).unwrap();
        assert_eq!(r.value, rat(7, 3));
    }

    #[test]
    fn fractional_chromatic_number_of_petersen() {
        let r = fractional_chromatic_number(&petersen()).unwrap();
        assert_eq!(r.value, rat(5, 2));
    }

    #[test]
    fn empty_graph_solves_to_zero() {
        let g = Graph::new(0);
        assert_eq!(fractional_vertex_arboricity(&g).unwrap().value, int(0));
        assert_eq!(vertex_arboricity(&g), (0, vec![]));
    }

    #[test]
    fn vertex_arboricity_small_cases() {
        assert_eq!(vertex_arboricity(&cycle(4)).0, 2);
        assert_eq!(vertex_arboricity(&named_graph("k4").unwrap()).0, 2);
        assert_eq!(vertex_arboricity(&cube()).0, 2);
        assert_eq!(vertex_arboricity(&petersen()).0, 2);
        let (k, classes) = vertex_arboricity(&crate::graph::complete(5));
        assert_eq!(k, 3);
        for c in 0..k {
            let class: BTreeSet<usize> =
                (0..5).filter(|&v| classes[v] == c).collect();
            assert!(crate::graph::complete(5).is_induced_forest(&class));
        }
    }

    #[test]
    fn vertex_arboricity_partition_is_valid() {
        let g = dodecahedron();
        let (k, classes) = vertex_arboricity(&g);
        assert_eq!(k, 2);
        for c in 0..k {
            let class: BTreeSet<usize> = (0..g.n()).filter(|&v| classes[v] == c).collect();
            assert!(g.is_induced_forest(&class));
        }
    }

    #[test]
    fn acyclic_coloring_of_small_graphs() {
        let g = cycle(5);
        let c = acyclic_coloring(&g, 3).unwrap();
        assert!(is_acyclic_coloring(&g, &c));
        // a 4-cycle needs 3 colors acyclically: with 2, both classes union
        // to the whole cycle
        assert!(acyclic_coloring(&cycle(4), 2).is_none());
        assert!(acyclic_coloring(&cycle(4), 3).is_some());
    }

    #[test]
    fn acyclic_five_colorings_of_named_graphs() {
        for label in ["k4", "cube", "petersen", "dodecahedron"] {
            let g = named_graph(label).unwrap();
            let c = acyclic_coloring(&g, 5).unwrap();
            assert!(is_acyclic_coloring(&g, &c), "{label}");
        }
    }

    #[test]
    fn five_class_table_covers_every_level_twice() {
        let table = five_class_table();
        for s in &table {
            assert_eq!(s.measure(), int(1));
        }
        for atom in atoms(&table).atoms {
            assert_eq!(atom.members.len(), 2, "levels {} lie in {:?}", atom.set, atom.members);
        }
    }

    #[test]
    fn coloring_conversion_verifies_on_the_cube() {
        let g = cube();
        let c = acyclic_coloring(&g, 5).unwrap();
        let phi = arborization_from_acyclic5(&g, &c).unwrap();
        for v in 0..g.n() {
            assert_eq!(phi.get(v).unwrap().measure(), int(1));
        }
    }

    #[test]
    fn coloring_conversion_rejects_bad_colorings() {
        let g = cycle(4);
        // constant coloring is not even proper
        assert_eq!(
            arborization_from_acyclic5(&g, &[0, 0, 0, 0]).unwrap_err(),
            ConvertError::NotAcyclic
        );
        assert_eq!(
            arborization_from_acyclic5(&g, &[0, 1]).unwrap_err(),
            ConvertError::ColoringLength { expected: 4, got: 2 }
        );
        assert_eq!(
            arborization_from_acyclic5(&g, &[0, 5, 0, 1]).unwrap_err(),
            ConvertError::ColorOutOfRange { color: 5 }
        );
    }

    #[test]
    fn cover_conversion_on_a_five_cycle() {
        let g = cycle(5);
        let r = fractional_vertex_arboricity(&g).unwrap();
        let (phi, width) = arborization_from_cover(&g, &r.cover).unwrap();
        assert_eq!(width, rat(5, 4));
        for v in 0..5 {
            assert_eq!(phi.get(v).unwrap().measure(), int(1));
        }
    }

    #[test]
    fn cover_conversion_rejects_shortfalls() {
        let g = cycle(3);
        let cover = vec![(BTreeSet::from([0, 1]), rat(1, 2))];
        let err = arborization_from_cover(&g, &cover).unwrap_err();
        assert_eq!(err, ConvertError::Uncovered { vertex: 0, total: rat(1, 2) });
        let cover = vec![(BTreeSet::from([0, 1, 2]), int(1))];
        assert_eq!(
            arborization_from_cover(&g, &cover).unwrap_err(),
            ConvertError::NotAForest { index: 0 }
        );
    }
}
