//! Interval assignments on graph vertices and their verification.
//!
//! An assignment maps each vertex of its domain to a finite union of
//! half-open intervals. For a point t, the level set is the set of domain
//! vertices whose interval set contains t; an assignment is valid when every
//! level set induces a forest. Verification modes layer extra requirements
//! on top: width bounds, per-vertex admissible lists, forbidden paths
//! between anchored vertices, or per-vertex measure demands.
//!
//! The domain may be a strict subset of the graph's vertices; only edges
//! with both ends in the domain are consulted, so a partial assignment is
//! checked against the induced subgraph.
//!
//! All checks work atom by atom: the endpoints of the interval sets cut the
//! line into finitely many elementary pieces on which membership is
//! constant, so finitely many forest checks cover every level exactly.

use crate::combine::OffshootAssignment;
use crate::graph::Graph;
use crate::interval::{atoms, IntervalSet};
use crate::rational::Rational;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Arborization {
    map: BTreeMap<usize, IntervalSet>,
}

impl Arborization {
    pub fn new() -> Self {
        Arborization { map: BTreeMap::new() }
    }

    pub fn from_map(map: BTreeMap<usize, IntervalSet>) -> Self {
        Arborization { map }
    }

    pub fn insert(&mut self, v: usize, set: IntervalSet) {
        self.map.insert(v, set);
    }

    pub fn get(&self, v: usize) -> Option<&IntervalSet> {
        self.map.get(&v)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.keys().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.map.contains_key(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &IntervalSet)> {
        self.map.iter().map(|(&v, s)| (v, s))
    }

    pub fn as_map(&self) -> &BTreeMap<usize, IntervalSet> {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Keeps only the vertices in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Self {
        Arborization {
            map: self.map.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, s)| (v, s.clone())).collect(),
        }
    }

    /// Shrinks every vertex to the earliest portion of measure exactly one.
    /// Dropping points never creates level cycles, so validity is preserved.
    pub fn trim_to_unit(&self) -> Result<Self, Violation> {
        let mut map = BTreeMap::new();
        for (&v, s) in &self.map {
            let m = s.measure();
            if m < Rational::one() {
                return Err(Violation::MeasureShortfall { vertex: v, required: Rational::one(), actual: m });
            }
            map.insert(v, s.prefix(&Rational::one()));
        }
        Ok(Arborization { map })
    }
}

impl FromIterator<(usize, IntervalSet)> for Arborization {
    fn from_iter<T: IntoIterator<Item = (usize, IntervalSet)>>(iter: T) -> Self {
        Arborization { map: iter.into_iter().collect() }
    }
}

/// What `verify` requires beyond level sets inducing forests.
#[derive(Debug, Clone, Copy)]
pub enum VerifyMode<'a> {
    /// measure at least 1 per vertex
    Plain,
    /// Plain, and every vertex stays inside [0, width)
    Width(&'a Rational),
    /// Plain, and every vertex stays inside its admissible list
    Lists(&'a BTreeMap<usize, IntervalSet>),
    /// Lists, and no level path joins two vertices on a level both have
    /// marked as an offshoot
    Offshoot(&'a OffshootAssignment),
    /// no level path joins two of the given vertices; no measure or
    /// containment requirements
    Anchored(&'a BTreeSet<usize>),
    /// vertices stay inside [0, 1) and meet the given per-vertex measures
    Demand(&'a BTreeMap<usize, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("vertex {vertex} is not a vertex of the graph")]
    ForeignVertex { vertex: usize },
    #[error("vertex {vertex} has no admissible list")]
    MissingList { vertex: usize },
    #[error("vertex {vertex} has no demanded measure")]
    MissingDemand { vertex: usize },
    #[error("vertex {vertex} carries measure {actual}, needs {required}")]
    MeasureShortfall { vertex: usize, required: Rational, actual: Rational },
    #[error("vertex {vertex} leaves its admissible set on {excess}")]
    NotContained { vertex: usize, excess: IntervalSet },
    #[error("levels {level} induce the cycle {cycle:?}")]
    LevelCycle { level: IntervalSet, cycle: Vec<usize> },
    #[error("levels {level} join anchored vertices {ends:?} by the path {path:?}")]
    AnchoredPath { level: IntervalSet, ends: (usize, usize), path: Vec<usize> },
}

/// Finds a cycle inside the induced subgraph on `members`, if one exists.
/// Iterative DFS; in an undirected graph a visited non-parent neighbor is an
/// ancestor of the current vertex, so walking the parent chain recovers the
/// cycle.
// entry() cannot express the visited check: the else branch reads other keys
// of the map while an entry guard would still hold the borrow
#[allow(clippy::map_entry)]
fn find_cycle(g: &Graph, members: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    for &root in members {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if !members.contains(&w) {
                    continue;
                }
                if !parent.contains_key(&w) {
                    parent.insert(w, Some(u));
                    stack.push(w);
                } else if parent[&u] != Some(w) {
                    // w was reached before u on another branch: climb both
                    // parent chains to their meeting point
                    let chain = |mut x: usize| {
                        let mut path = vec![x];
                        while let Some(Some(p)) = parent.get(&x) {
                            path.push(*p);
                            x = *p;
                        }
                        path
                    };
                    let (cu, cw) = (chain(u), chain(w));
                    let anc: BTreeSet<usize> = cu.iter().copied().collect();
                    let meet = *cw.iter().find(|x| anc.contains(x)).unwrap();
                    let mut cycle: Vec<usize> =
                        cu.iter().take_while(|&&x| x != meet).copied().collect();
                    cycle.push(meet);
                    let mut back: Vec<usize> =
                        cw.iter().take_while(|&&x| x != meet).copied().collect();
                    back.reverse();
                    cycle.extend(back);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn component_labels(g: &Graph, members: &BTreeSet<usize>) -> BTreeMap<usize, usize> {
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0usize;
    for &root in members {
        if label.contains_key(&root) {
            continue;
        }
        label.insert(root, next);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if members.contains(&w) && !label.contains_key(&w) {
                    label.insert(w, next);
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

fn bfs_path(g: &Graph, members: &BTreeSet<usize>, from: usize, to: usize) -> Vec<usize> {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for w in g.neighbors(u) {
            if members.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    path
}

pub fn verify(g: &Graph, phi: &Arborization, mode: VerifyMode) -> Result<(), Violation> {
    for v in phi.domain() {
        if v >= g.n() {
            return Err(Violation::ForeignVertex { vertex: v });
        }
    }
    let one = Rational::one();
    for (v, s) in phi.iter() {
        match mode {
            VerifyMode::Plain => {
                let m = s.measure();
                if m < one {
                    return Err(Violation::MeasureShortfall { vertex: v, required: one, actual: m });
                }
            }
            VerifyMode::Width(k) => {
                let ambient = IntervalSet::interval(&Rational::zero(), k);
                let excess = s.difference(&ambient);
                if !excess.is_empty() {
                    return Err(Violation::NotContained { vertex: v, excess });
                }
                let m = s.measure();
                if m < one {
                    return Err(Violation::MeasureShortfall { vertex: v, required: one, actual: m });
                }
            }
            VerifyMode::Lists(lists) | VerifyMode::Offshoot(OffshootAssignment { lists, .. }) => {
                let Some(list) = lists.get(&v) else {
                    return Err(Violation::MissingList { vertex: v });
                };
                let excess = s.difference(list);
                if !excess.is_empty() {
                    return Err(Violation::NotContained { vertex: v, excess });
                }
                let m = s.measure();
                if m < one {
                    return Err(Violation::MeasureShortfall { vertex: v, required: one, actual: m });
                }
            }
            VerifyMode::Anchored(_) => {}
            VerifyMode::Demand(demand) => {
                let Some(required) = demand.get(&v) else {
                    return Err(Violation::MissingDemand { vertex: v });
                };
                let ambient = IntervalSet::interval(&Rational::zero(), &one);
                let excess = s.difference(&ambient);
                if !excess.is_empty() {
                    return Err(Violation::NotContained { vertex: v, excess });
                }
                let m = s.measure();
                if &m < required {
                    return Err(Violation::MeasureShortfall {
                        vertex: v,
                        required: required.clone(),
                        actual: m,
                    });
                }
            }
        }
    }

    // atomize the assignment, together with the offshoot sets when paths
    // between offshoot-anchored vertices are forbidden
    let vertices: Vec<usize> = phi.domain().collect();
    let mut family: Vec<IntervalSet> = vertices.iter().map(|&v| phi.get(v).unwrap().clone()).collect();
    let phi_count = family.len();
    if let VerifyMode::Offshoot(lo) = mode {
        for &v in &vertices {
            family.push(lo.offshoots.get(&v).cloned().unwrap_or_else(IntervalSet::empty));
        }
    }
    for atom in atoms(&family).atoms {
        let members: BTreeSet<usize> =
            atom.members.iter().filter(|&&i| i < phi_count).map(|&i| vertices[i]).collect();
        if let Some(cycle) = find_cycle(g, &members) {
            return Err(Violation::LevelCycle { level: atom.set, cycle });
        }
        let anchors: Vec<usize> = match mode {
            VerifyMode::Offshoot(_) => members
                .iter()
                .copied()
                .filter(|&v| {
                    let slot = phi_count + vertices.iter().position(|&u| u == v).unwrap();
                    atom.members.contains(&slot)
                })
                .collect(),
            VerifyMode::Anchored(set) => members.intersection(set).copied().collect(),
            _ => continue,
        };
        if anchors.len() < 2 {
            continue;
        }
        let labels = component_labels(g, &members);
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in &anchors {
            if let Some(&b) = seen.get(&labels[&a]) {
                let path = bfs_path(g, &members, b, a);
                return Err(Violation::AnchoredPath { level: atom.set, ends: (b, a), path });
            }
            seen.insert(labels[&a], a);
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BlockedSetError {
    #[error("vertex {vertex} is not in the assignment's domain")]
    VertexNotInDomain { vertex: usize },
    #[error(transparent)]
    InvalidHost(#[from] Violation),
}

/// Levels at which attaching `v` to its already-assigned neighbors would
/// close a cycle: levels carried by two neighbors of `v` lying in the same
/// component of the level forest away from `v`.
///
/// The host assignment (everything except `v`) must itself be valid; its
/// levels induce forests, so attaching `v` creates a cycle exactly when two
/// of its neighbors sit in one component.
pub fn blocked_set(g: &Graph, phi: &Arborization, v: usize) -> Result<IntervalSet, BlockedSetError> {
    if v >= g.n() {
        return Err(BlockedSetError::VertexNotInDomain { vertex: v });
    }
    let mut others = phi.clone();
    others.map.remove(&v);
    verify(g, &others, VerifyMode::Plain)?;
    let vertices: Vec<usize> = others.domain().collect();
    let family: Vec<IntervalSet> = vertices.iter().map(|&u| others.get(u).unwrap().clone()).collect();
    let mut blocked = IntervalSet::empty();
    for atom in atoms(&family).atoms {
        let members: BTreeSet<usize> = atom.members.iter().map(|&i| vertices[i]).collect();
        let labels = component_labels(g, &members);
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut blocks = false;
        for w in g.neighbors(v) {
            if let Some(&l) = labels.get(&w) {
                if !seen.insert(l) {
                    blocks = true;
                    break;
                }
            }
        }
        if blocks {
            blocked = blocked.union(&atom.set);
        }
    }
    Ok(blocked)
}
