//! Extension procedures: given a valid width-(2-eps) assignment on a graph
//! with part of a reducible configuration removed, re-attach the missing
//! vertices and produce a verified assignment on the whole graph.
//!
//! The star procedure removes the degree-2 arms around a center of
//! effective degree at most two; the path procedure removes a degree-3
//! center between two light neighbors. Both derive admissible lists from
//! the blocked levels of the existing assignment, mark offshoot levels
//! where outside neighbors already sit, and hand a fixed demand schedule to
//! the combiner. Every inequality the construction relies on is checked at
//! run time and failures surface as errors, never as invalid output.

use crate::arborization::{blocked_set, verify, Arborization, BlockedSetError, VerifyMode, Violation};
use crate::combine::{
    combine, covering_lhs, CellId, CombineError, DemandSchedule, OffshootAssignment,
    OffshootError, ScheduleEntry,
};
use crate::gadget::{validate_witness, ConfigKind, ConfigWitness, WitnessError};
use crate::graph::Graph;
use crate::interval::IntervalSet;
use crate::rational::{rat, Rational};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("expected a {expected:?} witness, got {got:?}")]
    WrongKind { expected: ConfigKind, got: ConfigKind },
    #[error("epsilon {epsilon} outside (0, {limit}]")]
    EpsilonOutOfRange { epsilon: Rational, limit: Rational },
    #[error("neighbor {neighbor} of vertex {vertex} is not covered by any role")]
    NeighborNotInRoles { vertex: usize, neighbor: usize },
    #[error("role {role:?} repeats vertex {vertex}")]
    RepeatedRole { role: String, vertex: usize },
    #[error("role {role:?} disagrees with the graph: expected vertex {expected}, got {got}")]
    RoleMismatch { role: String, expected: usize, got: usize },
    #[error("degree-2 arms {a} and {b} are adjacent")]
    ArmsAdjacent { a: usize, b: usize },
    #[error("side vertices {a} and {b} are adjacent")]
    SidesAdjacent { a: usize, b: usize },
    #[error("side vertex {vertex} has degree {degree}, outside 3..=5")]
    SideDegree { vertex: usize, degree: usize },
    #[error("far end {vertex} lies among the removed vertices")]
    FarEndRemoved { vertex: usize },
    #[error("no degree-2 arms to re-attach")]
    NoArms,
    #[error("assignment domain mismatch: missing {missing:?}, unexpected {extra:?}")]
    DomainMismatch { missing: Vec<usize>, extra: Vec<usize> },
    #[error(transparent)]
    Verification(#[from] Violation),
    #[error("vertex {vertex} carries measure {measure}, normalization needs exactly 1")]
    NotUnitMeasure { vertex: usize, measure: Rational },
    #[error("vertices {a} and {b} overlap on measure {overlap}, normalization needs {needed}")]
    InsufficientOverlap { a: usize, b: usize, overlap: Rational, needed: Rational },
    #[error("{name} is {value}, exceeding the required bound {limit}")]
    BoundViolated { name: &'static str, value: Rational, limit: Rational },
    #[error(transparent)]
    Offshoot(#[from] OffshootError),
    #[error(transparent)]
    Combine(#[from] CombineError),
}

impl From<BlockedSetError> for ExtendError {
    fn from(e: BlockedSetError) -> Self {
        match e {
            BlockedSetError::VertexNotInDomain { vertex } => {
                ExtendError::Verification(Violation::ForeignVertex { vertex })
            }
            BlockedSetError::InvalidHost(v) => ExtendError::Verification(v),
        }
    }
}

/// Largest epsilon the star procedure accepts.
pub fn star_epsilon_limit() -> Rational {
    rat(5, 49)
}

/// Largest epsilon the path procedure accepts.
pub fn path_epsilon_limit() -> Rational {
    rat(1, 324)
}

fn check_epsilon(eps: &Rational, limit: Rational) -> Result<(), ExtendError> {
    if eps <= &Rational::zero() || eps > &limit {
        return Err(ExtendError::EpsilonOutOfRange { epsilon: eps.clone(), limit });
    }
    Ok(())
}

/// Rewrites the assignment at `u`, a degree-2 vertex with far neighbor
/// `u_far`, to the complement of the far neighbor's set plus a slice of
/// measure `eps` of their overlap. Afterward the two overlap on exactly
/// that slice. Both vertices must carry measure exactly one inside
/// [0, 2 - eps); the overlap is then at least `eps` automatically.
pub fn normalize_degree_two(
    g: &Graph,
    phi: &Arborization,
    u: usize,
    u_far: usize,
    eps: &Rational,
) -> Result<Arborization, ExtendError> {
    let width = &rat(2, 1) - eps;
    let ambient = IntervalSet::interval(&Rational::zero(), &width);
    verify(g, phi, VerifyMode::Width(&width))?;
    for vertex in [u, u_far] {
        let Some(s) = phi.get(vertex) else {
            return Err(ExtendError::Verification(Violation::ForeignVertex { vertex }));
        };
        let measure = s.measure();
        if measure != Rational::one() {
            return Err(ExtendError::NotUnitMeasure { vertex, measure });
        }
    }
    let overlap = phi.get(u).unwrap().intersect(phi.get(u_far).unwrap());
    if &overlap.measure() < eps {
        return Err(ExtendError::InsufficientOverlap {
            a: u,
            b: u_far,
            overlap: overlap.measure(),
            needed: eps.clone(),
        });
    }
    let slice = overlap.prefix(eps);
    let replaced = ambient.difference(phi.get(u_far).unwrap()).union(&slice);
    let mut out = phi.clone();
    out.insert(u, replaced);
    verify(g, &out, VerifyMode::Width(&width))?;
    Ok(out)
}

/// Vertex states inside a cell signature.
#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    Anchored,
    Excluded,
}

fn enumerate_states(h: &[usize]) -> Vec<Vec<State>> {
    let mut out = Vec::with_capacity(3usize.pow(h.len() as u32));
    let mut cur = vec![State::Free; h.len()];
    fn rec(i: usize, cur: &mut Vec<State>, out: &mut Vec<Vec<State>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for s in [State::Free, State::Anchored, State::Excluded] {
            cur[i] = s;
            rec(i + 1, cur, out);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

fn cell_id(h: &[usize], states: &[State]) -> CellId {
    CellId {
        excluded: h
            .iter()
            .zip(states)
            .filter(|(_, s)| matches!(s, State::Excluded))
            .map(|(&v, _)| v)
            .collect(),
        anchored: h
            .iter()
            .zip(states)
            .filter(|(_, s)| matches!(s, State::Anchored))
            .map(|(&v, _)| v)
            .collect(),
    }
}

fn unit() -> IntervalSet {
    IntervalSet::interval(&Rational::zero(), &Rational::one())
}

fn span(a: Rational, b: Rational) -> IntervalSet {
    IntervalSet::interval(&a, &b)
}

/// Demand schedule for the star procedure on H = {v, arms...}. With a big
/// blocked set the center takes a full unit everywhere it can and the arms
/// demand nothing; otherwise the center cedes a seventh to anchored arms.
/// Anchored arms in different cells use disjoint sevenths indexed by arm
/// position, so their levels never meet.
pub fn star_schedule(v: usize, arms: &[usize], big_blocked: bool) -> DemandSchedule {
    assert!(!arms.is_empty() && arms.len() <= 7, "1..=7 arms");
    let h: Vec<usize> = std::iter::once(v).chain(arms.iter().copied()).collect();
    let mut entries = BTreeMap::new();
    for states in enumerate_states(&h) {
        let id = cell_id(&h, &states);
        let mut entry = ScheduleEntry::default();
        let v_state = states[0];
        match v_state {
            State::Anchored if big_blocked => {
                entry.demand.insert(v, Rational::one());
                entry.cert.insert(v, unit());
                for (&u, s) in h[1..].iter().zip(&states[1..]) {
                    if !matches!(s, State::Excluded) {
                        entry.demand.insert(u, Rational::zero());
                        entry.cert.insert(u, IntervalSet::empty());
                    }
                }
            }
            State::Anchored => {
                entry.demand.insert(v, rat(6, 7));
                entry.cert.insert(v, span(rat(0, 1), rat(6, 7)));
                for (&u, s) in h[1..].iter().zip(&states[1..]) {
                    match s {
                        State::Anchored => {
                            entry.demand.insert(u, rat(1, 7));
                            entry.cert.insert(u, span(rat(6, 7), rat(1, 1)));
                        }
                        State::Free => {
                            entry.demand.insert(u, Rational::one());
                            entry.cert.insert(u, unit());
                        }
                        State::Excluded => {}
                    }
                }
            }
            State::Free => {
                entry.demand.insert(v, Rational::one());
                entry.cert.insert(v, unit());
                for (j, (&u, s)) in h[1..].iter().zip(&states[1..]).enumerate() {
                    match s {
                        State::Anchored => {
                            entry.demand.insert(u, rat(1, 7));
                            entry.cert.insert(u, span(rat(j as i64, 7), rat(j as i64 + 1, 7)));
                        }
                        State::Free => {
                            entry.demand.insert(u, Rational::one());
                            entry.cert.insert(u, unit());
                        }
                        State::Excluded => {}
                    }
                }
            }
            State::Excluded => {
                for (&u, s) in h[1..].iter().zip(&states[1..]) {
                    if !matches!(s, State::Excluded) {
                        entry.demand.insert(u, Rational::one());
                        entry.cert.insert(u, unit());
                    }
                }
            }
        }
        entries.insert(id, entry);
    }
    let schedule = DemandSchedule { entries };
    assert_star_properties(v, arms, big_blocked, &schedule);
    schedule
}

/// The promises every star schedule keeps, checked entry by entry: outside
/// the big-blocked anchored branch, free vertices demand a full unit and
/// arms demand at least a seventh; an anchored center demands at least six
/// sevenths, exactly one when the blocked set is big.
fn assert_star_properties(v: usize, arms: &[usize], big_blocked: bool, schedule: &DemandSchedule) {
    for (id, entry) in &schedule.entries {
        let skip = big_blocked && id.anchored.contains(&v);
        for &u in arms {
            if id.excluded.contains(&u) {
                continue;
            }
            let f = &entry.demand[&u];
            if !skip {
                assert!(f >= &rat(1, 7), "arm demand at least 1/7");
                if !id.anchored.contains(&u) {
                    assert!(f == &Rational::one(), "free arm demand exactly 1");
                }
            }
        }
        if !id.excluded.contains(&v) {
            let f = &entry.demand[&v];
            if id.anchored.contains(&v) {
                assert!(f >= &rat(6, 7), "anchored center demand at least 6/7");
                if big_blocked {
                    assert!(f == &Rational::one(), "big blocked set pins the center demand");
                }
            } else {
                assert!(f == &Rational::one(), "free center demand exactly 1");
            }
        }
    }
}

/// Demand schedule for the path procedure on H = {v1, v, v2}. When an
/// anchored side has a big blocked set, both sides take a full unit and the
/// center demands nothing. Otherwise an anchored side takes three fifths at
/// the bottom and the center works around it, splitting its certificate to
/// keep the two sides apart.
pub fn path_schedule(
    v: usize,
    v1: usize,
    v2: usize,
    big1: bool,
    big2: bool,
) -> DemandSchedule {
    let h = [v, v1, v2];
    let mut entries = BTreeMap::new();
    for states in enumerate_states(&h) {
        let id = cell_id(&h, &states);
        let (sv, s1, s2) = (states[0], states[1], states[2]);
        let mut entry = ScheduleEntry::default();
        let side_big = (matches!(s1, State::Anchored) && big1)
            || (matches!(s2, State::Anchored) && big2);
        if side_big {
            for (&u, s) in [v1, v2].iter().zip([s1, s2]) {
                if !matches!(s, State::Excluded) {
                    entry.demand.insert(u, Rational::one());
                    entry.cert.insert(u, unit());
                }
            }
            if !matches!(sv, State::Excluded) {
                entry.demand.insert(v, Rational::zero());
                entry.cert.insert(v, IntervalSet::empty());
            }
        } else if matches!(s1, State::Anchored) || matches!(s2, State::Anchored) {
            // lead: the anchored side (side 1 preferred); tail: the other
            let (lead, tail, s_tail) = if matches!(s1, State::Anchored) {
                (v1, v2, s2)
            } else {
                (v2, v1, s1)
            };
            entry.demand.insert(lead, rat(3, 5));
            entry.cert.insert(lead, span(rat(0, 1), rat(3, 5)));
            match sv {
                State::Anchored => {
                    entry.demand.insert(v, rat(2, 5));
                    entry.cert.insert(v, span(rat(3, 5), rat(1, 1)));
                    match s_tail {
                        State::Anchored => {
                            entry.demand.insert(tail, rat(3, 5));
                            entry.cert.insert(tail, span(rat(0, 1), rat(3, 5)));
                        }
                        State::Free => {
                            entry.demand.insert(tail, Rational::one());
                            entry.cert.insert(tail, unit());
                        }
                        State::Excluded => {}
                    }
                }
                State::Free => {
                    entry.demand.insert(v, rat(4, 5));
                    entry.cert.insert(
                        v,
                        span(rat(3, 5), rat(1, 1)).union(&span(rat(0, 1), rat(2, 5))),
                    );
                    match s_tail {
                        State::Anchored => {
                            entry.demand.insert(tail, rat(3, 5));
                            entry.cert.insert(tail, span(rat(2, 5), rat(1, 1)));
                        }
                        State::Free => {
                            entry.demand.insert(tail, Rational::one());
                            entry.cert.insert(tail, unit());
                        }
                        State::Excluded => {}
                    }
                }
                State::Excluded => match s_tail {
                    State::Anchored => {
                        entry.demand.insert(tail, rat(3, 5));
                        entry.cert.insert(tail, span(rat(0, 1), rat(3, 5)));
                    }
                    State::Free => {
                        entry.demand.insert(tail, Rational::one());
                        entry.cert.insert(tail, unit());
                    }
                    State::Excluded => {}
                },
            }
        } else {
            // no anchored side: everyone not excluded takes a full unit;
            // at most one vertex (the center) can be anchored, so shared
            // levels stay harmless
            for (&u, s) in h.iter().zip(&states) {
                if !matches!(s, State::Excluded) {
                    entry.demand.insert(u, Rational::one());
                    entry.cert.insert(u, unit());
                }
            }
        }
        entries.insert(id, entry);
    }
    let schedule = DemandSchedule { entries };
    assert_path_properties(v, v1, v2, big1, big2, &schedule);
    schedule
}

/// The promises every path schedule keeps: sides not excluded demand at
/// least 3/5 (a full unit when free, and exactly one when anchored with a
/// big blocked set); outside big-blocked branches a free center demands at
/// least 4/5 and an anchored center at least 2/5.
fn assert_path_properties(
    v: usize,
    v1: usize,
    v2: usize,
    big1: bool,
    big2: bool,
    schedule: &DemandSchedule,
) {
    for (id, entry) in &schedule.entries {
        let side_big = (id.anchored.contains(&v1) && big1) || (id.anchored.contains(&v2) && big2);
        for (&u, big) in [v1, v2].iter().zip([big1, big2]) {
            if id.excluded.contains(&u) {
                continue;
            }
            let f = &entry.demand[&u];
            assert!(f >= &rat(3, 5), "side demand at least 3/5");
            if !id.anchored.contains(&u) {
                assert!(f == &Rational::one(), "free side demand exactly 1");
            }
            if id.anchored.contains(&u) && big {
                assert!(f == &Rational::one(), "big anchored side demand exactly 1");
            }
        }
        if !id.excluded.contains(&v) && !side_big {
            let f = &entry.demand[&v];
            if id.anchored.contains(&v) {
                assert!(f >= &rat(2, 5), "anchored center demand at least 2/5");
            } else {
                assert!(f >= &rat(4, 5), "free center demand at least 4/5");
            }
        }
    }
}

/// Everything an extension produces besides the assignment itself, for
/// reports and tests.
#[derive(Debug, Clone)]
pub struct ExtensionOutcome {
    pub assignment: Arborization,
    pub width: Rational,
    pub lists: OffshootAssignment,
    /// blocked levels per re-attached vertex with a restricted list
    pub blocked: BTreeMap<usize, IntervalSet>,
    pub big: BTreeMap<usize, bool>,
    /// covering sums per re-attached vertex
    pub covering: BTreeMap<usize, Rational>,
}

struct StarShape {
    v: usize,
    /// (arm, far end), in role order
    arms: Vec<(usize, usize)>,
    /// the center's remaining neighbors
    outer: Vec<usize>,
}

fn star_shape(g: &Graph, w: &ConfigWitness) -> Result<StarShape, ExtendError> {
    if w.kind != ConfigKind::EffectiveDegreeTwo {
        return Err(ExtendError::WrongKind {
            expected: ConfigKind::EffectiveDegreeTwo,
            got: w.kind,
        });
    }
    validate_witness(g, w)?;
    let v = w.center();
    let mut arms = Vec::new();
    let mut seen = BTreeSet::from([v]);
    for i in 1..=7usize {
        let Some(u) = w.role(&format!("u{i}")) else { continue };
        if !seen.insert(u) {
            return Err(ExtendError::RepeatedRole { role: format!("u{i}"), vertex: u });
        }
        let far = g.neighbors(u).find(|&x| x != v).expect("degree-2 arm");
        if let Some(claimed) = w.role(&format!("u{i}'")) {
            if claimed != far {
                return Err(ExtendError::RoleMismatch {
                    role: format!("u{i}'"),
                    expected: far,
                    got: claimed,
                });
            }
        }
        arms.push((u, far));
    }
    if arms.is_empty() {
        return Err(ExtendError::NoArms);
    }
    for i in 0..arms.len() {
        for j in i + 1..arms.len() {
            if g.has_edge(arms[i].0, arms[j].0) {
                return Err(ExtendError::ArmsAdjacent { a: arms[i].0, b: arms[j].0 });
            }
        }
    }
    let mut outer = Vec::new();
    for name in ["x", "y"] {
        if let Some(x) = w.role(name) {
            if !seen.insert(x) {
                return Err(ExtendError::RepeatedRole { role: name.to_string(), vertex: x });
            }
            outer.push(x);
        }
    }
    let covered: BTreeSet<usize> =
        arms.iter().map(|&(u, _)| u).chain(outer.iter().copied()).collect();
    for nb in g.neighbors(v) {
        if !covered.contains(&nb) {
            return Err(ExtendError::NeighborNotInRoles { vertex: v, neighbor: nb });
        }
    }
    Ok(StarShape { v, arms, outer })
}

fn expect_domain(
    g: &Graph,
    phi: &Arborization,
    removed: &BTreeSet<usize>,
) -> Result<(), ExtendError> {
    let expected: BTreeSet<usize> = (0..g.n()).filter(|v| !removed.contains(v)).collect();
    let actual: BTreeSet<usize> = phi.domain().collect();
    if expected != actual {
        return Err(ExtendError::DomainMismatch {
            missing: expected.difference(&actual).copied().collect(),
            extra: actual.difference(&expected).copied().collect(),
        });
    }
    Ok(())
}

fn merge_and_verify(
    g: &Graph,
    phi: &Arborization,
    h: &BTreeSet<usize>,
    phi_h: &Arborization,
    width: &Rational,
) -> Result<Arborization, ExtendError> {
    let keep: BTreeSet<usize> = phi.domain().filter(|v| !h.contains(v)).collect();
    let mut merged = phi.restrict(&keep);
    for (v, s) in phi_h.iter() {
        merged.insert(v, s.clone());
    }
    verify(g, &merged, VerifyMode::Width(width))?;
    let merged = merged.trim_to_unit().map_err(ExtendError::Verification)?;
    verify(g, &merged, VerifyMode::Width(width))?;
    Ok(merged)
}

/// Re-attaches the degree-2 arms around the witness center. The input
/// assignment must cover exactly the graph minus the arms, inside
/// [0, 2 - eps), with the center still assigned. The center's list drops
/// its blocked levels; arm offshoots sit where the far ends already are.
pub fn extend_star(
    g: &Graph,
    witness: &ConfigWitness,
    phi: &Arborization,
    eps: &Rational,
) -> Result<ExtensionOutcome, ExtendError> {
    check_epsilon(eps, star_epsilon_limit())?;
    let shape = star_shape(g, witness)?;
    let width = &rat(2, 1) - eps;
    let removed: BTreeSet<usize> = shape.arms.iter().map(|&(u, _)| u).collect();
    expect_domain(g, phi, &removed)?;
    verify(g, phi, VerifyMode::Width(&width))?;

    let blocked = blocked_set(g, phi, shape.v)?;
    let blocked_limit = &Rational::one() - eps;
    if blocked.measure() > blocked_limit {
        return Err(ExtendError::BoundViolated {
            name: "blocked measure at the center",
            value: blocked.measure(),
            limit: blocked_limit,
        });
    }
    let big = blocked.measure() > &Rational::one() - &(&rat(7, 5) * eps);

    let ambient = IntervalSet::interval(&Rational::zero(), &width);
    let center_list = ambient.difference(&blocked);
    let mut outer_union = IntervalSet::empty();
    for &x in &shape.outer {
        outer_union = outer_union.union(phi.get(x).expect("outer neighbors keep assignments"));
    }
    let center_offshoot = center_list.intersect(&outer_union);
    let offshoot_limit = &rat(2, 1) - &(&rat(2, 1) * &blocked.measure());
    if center_offshoot.measure() > offshoot_limit {
        return Err(ExtendError::BoundViolated {
            name: "offshoot measure at the center",
            value: center_offshoot.measure(),
            limit: offshoot_limit,
        });
    }

    let mut lists = BTreeMap::from([(shape.v, center_list)]);
    let mut offshoots = BTreeMap::from([(shape.v, center_offshoot)]);
    for &(u, far) in &shape.arms {
        lists.insert(u, ambient.clone());
        offshoots.insert(u, phi.get(far).expect("far ends keep assignments").clone());
    }
    let lo = OffshootAssignment::new(lists, offshoots)?;

    let arm_ids: Vec<usize> = shape.arms.iter().map(|&(u, _)| u).collect();
    let schedule = star_schedule(shape.v, &arm_ids, big);
    let h: BTreeSet<usize> = std::iter::once(shape.v).chain(arm_ids.iter().copied()).collect();
    let mut covering = BTreeMap::new();
    for &u in &h {
        covering.insert(u, covering_lhs(u, &lo, &schedule)?);
    }
    let phi_h = combine(g, &lo, &schedule)?;
    let assignment = merge_and_verify(g, phi, &h, &phi_h, &width)?;
    Ok(ExtensionOutcome {
        assignment,
        width,
        lists: lo,
        blocked: BTreeMap::from([(shape.v, blocked)]),
        big: BTreeMap::from([(shape.v, big)]),
        covering,
    })
}

struct SideShape {
    vi: usize,
    /// degree-2 neighbors with their far ends
    pairs: Vec<(usize, usize)>,
    /// remaining neighbors of the side vertex
    outer: Vec<usize>,
}

struct PathShape {
    v: usize,
    z: usize,
    sides: [SideShape; 2],
}

fn path_shape(g: &Graph, w: &ConfigWitness) -> Result<PathShape, ExtendError> {
    if w.kind != ConfigKind::DegreeThreeTwoLight {
        return Err(ExtendError::WrongKind {
            expected: ConfigKind::DegreeThreeTwoLight,
            got: w.kind,
        });
    }
    validate_witness(g, w)?;
    let v = w.center();
    let v1 = w.role("v1").expect("validated witness");
    let v2 = w.role("v2").expect("validated witness");
    if g.degree(v) != 3 {
        return Err(WitnessError::WrongDegree {
            role: "v".to_string(),
            vertex: v,
            degree: g.degree(v),
        }
        .into());
    }
    if g.has_edge(v1, v2) {
        return Err(ExtendError::SidesAdjacent { a: v1, b: v2 });
    }
    let z = g
        .neighbors(v)
        .find(|&u| u != v1 && u != v2)
        .expect("degree-3 center has a third neighbor");
    if let Some(claimed) = w.role("z") {
        if claimed != z {
            return Err(ExtendError::RoleMismatch { role: "z".to_string(), expected: z, got: claimed });
        }
    }
    let removed = BTreeSet::from([v, v1, v2]);
    let mut sides = Vec::new();
    for (i, vi) in [(1usize, v1), (2usize, v2)] {
        let deg = g.degree(vi);
        if !(3..=5).contains(&deg) {
            return Err(ExtendError::SideDegree { vertex: vi, degree: deg });
        }
        let mut covered = BTreeSet::new();
        let mut pairs = Vec::new();
        for name in [format!("u{i}"), format!("w{i}")] {
            let Some(u) = w.role(&name) else { continue };
            if !g.has_edge(vi, u) {
                return Err(WitnessError::NotAdjacent { a: format!("v{i}"), b: name }.into());
            }
            if g.degree(u) != 2 {
                return Err(WitnessError::WrongDegree { role: name, vertex: u, degree: g.degree(u) }
                    .into());
            }
            if !covered.insert(u) {
                return Err(ExtendError::RepeatedRole { role: name, vertex: u });
            }
            let far = g.neighbors(u).find(|&x| x != vi).expect("degree-2 side arm");
            if removed.contains(&far) {
                return Err(ExtendError::FarEndRemoved { vertex: far });
            }
            if let Some(claimed) = w.role(&format!("{name}'")) {
                if claimed != far {
                    return Err(ExtendError::RoleMismatch {
                        role: format!("{name}'"),
                        expected: far,
                        got: claimed,
                    });
                }
            }
            pairs.push((u, far));
        }
        let mut outer = Vec::new();
        for name in [format!("x{i}"), format!("y{i}")] {
            let Some(x) = w.role(&name) else { continue };
            if !g.has_edge(vi, x) {
                return Err(WitnessError::NotAdjacent { a: format!("v{i}"), b: name }.into());
            }
            if removed.contains(&x) {
                return Err(ExtendError::FarEndRemoved { vertex: x });
            }
            if !covered.insert(x) {
                return Err(ExtendError::RepeatedRole { role: name, vertex: x });
            }
            outer.push(x);
        }
        for nb in g.neighbors(vi) {
            if nb != v && !covered.contains(&nb) {
                return Err(ExtendError::NeighborNotInRoles { vertex: vi, neighbor: nb });
            }
        }
        sides.push(SideShape { vi, pairs, outer });
    }
    let sides: [SideShape; 2] = match sides.try_into() {
        Ok(s) => s,
        Err(_) => unreachable!("exactly two sides"),
    };
    Ok(PathShape { v, z, sides })
}

/// Re-attaches a degree-3 center between two light side vertices. The
/// input assignment covers the graph minus the center only; the side
/// vertices are re-assigned from scratch. Degree-2 neighbors of the sides
/// are first normalized against their far ends so the overlap with each
/// far end has measure exactly eps.
pub fn extend_path(
    g: &Graph,
    witness: &ConfigWitness,
    phi: &Arborization,
    eps: &Rational,
) -> Result<ExtensionOutcome, ExtendError> {
    check_epsilon(eps, path_epsilon_limit())?;
    let shape = path_shape(g, witness)?;
    let width = &rat(2, 1) - eps;
    expect_domain(g, phi, &BTreeSet::from([shape.v]))?;
    verify(g, phi, VerifyMode::Width(&width))?;

    let mut phi = phi.clone();
    for side in &shape.sides {
        for &(u, far) in &side.pairs {
            phi = normalize_degree_two(g, &phi, u, far, eps)?;
        }
    }

    let ambient = IntervalSet::interval(&Rational::zero(), &width);
    let (v1, v2) = (shape.sides[0].vi, shape.sides[1].vi);
    let mut lists = BTreeMap::from([(shape.v, ambient.clone())]);
    let z_set = phi.get(shape.z).expect("third neighbor keeps its assignment").clone();
    let mut offshoots = BTreeMap::from([(shape.v, z_set)]);
    let mut blocked_map = BTreeMap::new();
    let mut big_map = BTreeMap::new();
    for side in &shape.sides {
        let other = if side.vi == v1 { v2 } else { v1 };
        let keep: BTreeSet<usize> = phi.domain().filter(|&u| u != other).collect();
        let restricted = phi.restrict(&keep);
        let blocked = blocked_set(g, &restricted, side.vi)?;
        let blocked_limit = &Rational::one() - eps;
        if blocked.measure() > blocked_limit {
            return Err(ExtendError::BoundViolated {
                name: "blocked measure at a side vertex",
                value: blocked.measure(),
                limit: blocked_limit,
            });
        }
        let big = blocked.measure() > &Rational::one() - &(&rat(17, 1) * eps);
        let list = ambient.difference(&blocked);
        let mut sources = IntervalSet::empty();
        for &x in &side.outer {
            sources = sources.union(phi.get(x).expect("outer neighbors keep assignments"));
        }
        for &(u, far) in &side.pairs {
            let overlap = phi.get(u).unwrap().intersect(phi.get(far).unwrap());
            sources = sources.union(&overlap);
        }
        let offshoot = list.intersect(&sources);
        let offshoot_limit =
            &(&rat(2, 1) + &(&rat(6, 1) * eps)) - &(&rat(2, 1) * &blocked.measure());
        if offshoot.measure() > offshoot_limit {
            return Err(ExtendError::BoundViolated {
                name: "offshoot measure at a side vertex",
                value: offshoot.measure(),
                limit: offshoot_limit,
            });
        }
        lists.insert(side.vi, list);
        offshoots.insert(side.vi, offshoot);
        blocked_map.insert(side.vi, blocked);
        big_map.insert(side.vi, big);
    }
    let lo = OffshootAssignment::new(lists, offshoots)?;
    let schedule = path_schedule(shape.v, v1, v2, big_map[&v1], big_map[&v2]);
    let h = BTreeSet::from([shape.v, v1, v2]);
    let mut covering = BTreeMap::new();
    for &u in &h {
        covering.insert(u, covering_lhs(u, &lo, &schedule)?);
    }
    let phi_h = combine(g, &lo, &schedule)?;
    let assignment = merge_and_verify(g, &phi, &h, &phi_h, &width)?;
    Ok(ExtensionOutcome {
        assignment,
        width,
        lists: lo,
        blocked: blocked_map,
        big: big_map,
        covering,
    })
}

/// Number of cells a schedule covers; used by reports.
pub fn schedule_cells(schedule: &DemandSchedule) -> usize {
    schedule.entries.len()
}

/// Covering sums for every vertex of an offshoot assignment under a
/// schedule, reported even when below one.
pub fn covering_report(
    lo: &OffshootAssignment,
    schedule: &DemandSchedule,
) -> Result<BTreeMap<usize, Rational>, CombineError> {
    let mut out = BTreeMap::new();
    for v in lo.domain() {
        out.insert(v, covering_lhs(v, lo, schedule)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::gadget_graph;
    use crate::rational::int;
    use crate::solvers::{arborization_from_cover, fractional_vertex_arboricity};

    fn iv(a: (i64, i64), b: (i64, i64)) -> IntervalSet {
        IntervalSet::interval(&rat(a.0, a.1), &rat(b.0, b.1))
    }

    #[test]
    fn normalization_worked_example() {
        // both vertices on [0,1), eps 1/4: the rewritten set is the
        // complement [1,7/4) plus the overlap slice [0,1/4)
        let g = crate::graph::path(2);
        let phi: Arborization =
            vec![(0, iv((0, 1), (1, 1))), (1, iv((0, 1), (1, 1)))].into_iter().collect();
        let eps = rat(1, 4);
        let out = normalize_degree_two(&g, &phi, 0, 1, &eps).unwrap();
        let expected = iv((1, 1), (7, 4)).union(&iv((0, 1), (1, 4)));
        assert_eq!(out.get(0).unwrap(), &expected);
        assert_eq!(out.get(0).unwrap().measure(), int(1));
        assert_eq!(out.get(0).unwrap().intersect(out.get(1).unwrap()).measure(), eps);
    }

    #[test]
    fn normalization_is_stable_on_repeat() {
        let g = crate::graph::path(2);
        let phi: Arborization =
            vec![(0, iv((0, 1), (1, 1))), (1, iv((0, 1), (1, 1)))].into_iter().collect();
        let eps = rat(1, 4);
        let once = normalize_degree_two(&g, &phi, 0, 1, &eps).unwrap();
        let twice = normalize_degree_two(&g, &once, 0, 1, &eps).unwrap();
        assert_eq!(once.get(0).unwrap(), twice.get(0).unwrap());
    }

    #[test]
    fn normalization_requires_unit_measures() {
        let g = crate::graph::path(2);
        let phi: Arborization =
            vec![(0, iv((0, 1), (3, 2))), (1, iv((0, 1), (1, 1)))].into_iter().collect();
        let err = normalize_degree_two(&g, &phi, 0, 1, &rat(1, 4)).unwrap_err();
        assert!(matches!(err, ExtendError::NotUnitMeasure { vertex: 0, .. }));
    }

    #[test]
    fn star_schedule_covers_all_cells() {
        let s = star_schedule(0, &[1, 2, 3], false);
        assert_eq!(schedule_cells(&s), 81);
        let s = star_schedule(0, &[1, 2, 3, 4, 5, 6, 7], true);
        assert_eq!(schedule_cells(&s), 3usize.pow(8));
    }

    #[test]
    fn path_schedule_covers_all_cells() {
        for (b1, b2) in [(false, false), (true, false), (false, true), (true, true)] {
            let s = path_schedule(0, 1, 2, b1, b2);
            assert_eq!(schedule_cells(&s), 27);
        }
    }

    #[test]
    fn star_schedule_anchored_arms_use_disjoint_slices() {
        let s = star_schedule(0, &[1, 2], false);
        // cell: center free, both arms anchored
        let id = CellId { excluded: BTreeSet::new(), anchored: BTreeSet::from([1, 2]) };
        let entry = &s.entries[&id];
        assert!(entry.cert[&1].is_disjoint_from(&entry.cert[&2]));
        assert_eq!(entry.demand[&1], rat(1, 7));
    }

    #[test]
    fn path_schedule_center_splits_around_the_anchored_side() {
        let s = path_schedule(0, 1, 2, false, false);
        let id = CellId { excluded: BTreeSet::new(), anchored: BTreeSet::from([1, 2]) };
        let entry = &s.entries[&id];
        // both sides anchored: their certificates may overlap, but the
        // center's certificate avoids the overlap region entirely
        let shared = entry.cert[&1].intersect(&entry.cert[&2]);
        assert!(entry.cert[&0].is_disjoint_from(&shared));
    }

    fn widen_from_cover(g: &Graph, removed: &BTreeSet<usize>) -> Arborization {
        let (sub, ids) = g.delete_vertices(removed);
        let r = fractional_vertex_arboricity(&sub).unwrap();
        let (phi_sub, _) = arborization_from_cover(&sub, &r.cover).unwrap();
        phi_sub.iter().map(|(v, s)| (ids[v], s.clone())).collect()
    }

    #[test]
    fn star_extension_on_the_host_graph() {
        let (g, w) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        let removed: BTreeSet<usize> = (1..=7).collect();
        let phi = widen_from_cover(&g, &removed);
        let eps = star_epsilon_limit();
        let out = extend_star(&g, &w, &phi, &eps).unwrap();
        let width = &rat(2, 1) - &eps;
        verify(&g, &out.assignment, VerifyMode::Width(&width)).unwrap();
        assert_eq!(out.assignment.len(), g.n());
        for (_, s) in out.assignment.iter() {
            assert_eq!(s.measure(), int(1));
        }
        for total in out.covering.values() {
            assert!(total >= &int(1));
        }
        assert!(!out.big[&0]);
    }

    #[test]
    fn path_extension_on_the_host_graph() {
        let (g, w) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        let phi = widen_from_cover(&g, &BTreeSet::from([0]));
        let eps = path_epsilon_limit();
        let out = extend_path(&g, &w, &phi, &eps).unwrap();
        let width = &rat(2, 1) - &eps;
        verify(&g, &out.assignment, VerifyMode::Width(&width)).unwrap();
        assert_eq!(out.assignment.len(), g.n());
        for vi in [1usize, 2] {
            assert!(out.blocked[&vi].measure() <= &Rational::one() - &eps);
        }
    }

    #[test]
    fn epsilon_guards_reject_large_values() {
        let (g, w) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        let phi = Arborization::new();
        let err = extend_star(&g, &w, &phi, &rat(1, 4)).unwrap_err();
        assert!(matches!(err, ExtendError::EpsilonOutOfRange { .. }));
        let (g, w) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        let err = extend_path(&g, &w, &Arborization::new(), &rat(1, 100)).unwrap_err();
        assert!(matches!(err, ExtendError::EpsilonOutOfRange { .. }));
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let (g, w) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        let phi = Arborization::new();
        let err = extend_star(&g, &w, &phi, &rat(1, 20)).unwrap_err();
        assert!(matches!(err, ExtendError::DomainMismatch { .. }));
    }
}

