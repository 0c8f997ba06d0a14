//! Combining per-cell partial assignments into one assignment on a vertex
//! set H.
//!
//! Each vertex carries an admissible list and an offshoot subset of it. The
//! lists and offshoots cut the line into cells: all points sharing the same
//! excluded set X (vertices whose list misses the point) and the same
//! anchored set O (vertices whose offshoot covers the point). A schedule
//! supplies, per cell, a fractional demand and a certifying assignment over
//! the unit interval for the vertices outside X. The combiner transports
//! each certificate into its cell, takes unions, and checks the result.
//!
//! The transported pieces live in pairwise disjoint cells, so measures add:
//! a vertex ends up with at least its covering sum, and level forests are
//! inherited cell by cell from the certificates.

use crate::arborization::{verify, Arborization, VerifyMode, Violation};
use crate::graph::Graph;
use crate::interval::{atoms, IntervalSet};
use crate::rational::Rational;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffshootAssignment {
    pub lists: BTreeMap<usize, IntervalSet>,
    pub offshoots: BTreeMap<usize, IntervalSet>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OffshootError {
    #[error("vertex {vertex} has an offshoot set but no admissible list")]
    OffshootWithoutList { vertex: usize },
    #[error("offshoot of vertex {vertex} leaves its admissible list on {excess}")]
    OffshootNotInList { vertex: usize, excess: IntervalSet },
}

impl OffshootAssignment {
    /// Missing offshoot sets default to empty; every offshoot must stay
    /// inside the vertex's admissible list.
    pub fn new(
        lists: BTreeMap<usize, IntervalSet>,
        offshoots: BTreeMap<usize, IntervalSet>,
    ) -> Result<Self, OffshootError> {
        let mut full = BTreeMap::new();
        for (&v, o) in &offshoots {
            let Some(list) = lists.get(&v) else {
                return Err(OffshootError::OffshootWithoutList { vertex: v });
            };
            let excess = o.difference(list);
            if !excess.is_empty() {
                return Err(OffshootError::OffshootNotInList { vertex: v, excess });
            }
            full.insert(v, o.clone());
        }
        for &v in lists.keys() {
            full.entry(v).or_insert_with(IntervalSet::empty);
        }
        Ok(OffshootAssignment { lists, offshoots: full })
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.lists.keys().copied()
    }

    pub fn list(&self, v: usize) -> Option<&IntervalSet> {
        self.lists.get(&v)
    }

    pub fn offshoot(&self, v: usize) -> Option<&IntervalSet> {
        self.offshoots.get(&v)
    }
}

/// A cell's signature: which vertices are excluded (point outside their
/// list) and which are anchored (point inside their offshoot).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellId {
    pub excluded: BTreeSet<usize>,
    pub anchored: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellTable {
    pub cells: BTreeMap<CellId, IntervalSet>,
}

impl CellTable {
    /// Total measure across all cells; equals the measure of the union of
    /// the admissible lists.
    pub fn total_measure(&self) -> Rational {
        self.cells.values().map(|s| s.measure()).sum()
    }
}

/// Splits the union of the admissible lists into cells. Cells are pairwise
/// disjoint and cover the union exactly; each is keyed by its signature.
pub fn cells(lo: &OffshootAssignment) -> CellTable {
    let vertices: Vec<usize> = lo.domain().collect();
    let mut family: Vec<IntervalSet> = Vec::with_capacity(2 * vertices.len());
    for &v in &vertices {
        family.push(lo.lists[&v].clone());
    }
    for &v in &vertices {
        family.push(lo.offshoots[&v].clone());
    }
    let k = vertices.len();
    let mut table = CellTable::default();
    for atom in atoms(&family).atoms {
        let mut excluded: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut anchored = BTreeSet::new();
        for &i in &atom.members {
            if i < k {
                excluded.remove(&vertices[i]);
            } else {
                anchored.insert(vertices[i - k]);
            }
        }
        debug_assert!(excluded.is_disjoint(&anchored), "offshoots stay inside lists");
        let id = CellId { excluded, anchored };
        let entry = table.cells.entry(id).or_insert_with(IntervalSet::empty);
        *entry = entry.union(&atom.set);
    }
    table
}

/// Per-cell demands and unit-interval certificates for the non-excluded
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScheduleEntry {
    pub demand: BTreeMap<usize, Rational>,
    pub cert: BTreeMap<usize, IntervalSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DemandSchedule {
    pub entries: BTreeMap<CellId, ScheduleEntry>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CombineError {
    #[error("no schedule entry for cell excluded={excluded:?} anchored={anchored:?}")]
    MissingEntry { excluded: BTreeSet<usize>, anchored: BTreeSet<usize> },
    #[error("cell excluded={excluded:?} anchored={anchored:?} has no demand for vertex {vertex}")]
    MissingDemand { vertex: usize, excluded: BTreeSet<usize>, anchored: BTreeSet<usize> },
    #[error("cell excluded={excluded:?} anchored={anchored:?} certifies excluded vertex {vertex}")]
    CertificateForExcluded { vertex: usize, excluded: BTreeSet<usize>, anchored: BTreeSet<usize> },
    #[error("certificate for cell excluded={excluded:?} anchored={anchored:?} is invalid: {source}")]
    EntryInvalid { excluded: BTreeSet<usize>, anchored: BTreeSet<usize>, source: Violation },
    #[error("vertex {vertex} is covered to {total} < 1")]
    CoveringShort { vertex: usize, total: Rational },
    #[error("combined assignment fails verification: {source}")]
    ResultInvalid { source: Violation },
}

fn entry_for<'a>(
    schedule: &'a DemandSchedule,
    id: &CellId,
) -> Result<&'a ScheduleEntry, CombineError> {
    schedule.entries.get(id).ok_or_else(|| CombineError::MissingEntry {
        excluded: id.excluded.clone(),
        anchored: id.anchored.clone(),
    })
}

/// Covering sum for one vertex: over the cells not excluding it, demand
/// times cell measure.
pub fn covering_lhs(
    v: usize,
    lo: &OffshootAssignment,
    schedule: &DemandSchedule,
) -> Result<Rational, CombineError> {
    let table = cells(lo);
    let mut total = Rational::zero();
    for (id, cell) in &table.cells {
        if id.excluded.contains(&v) {
            continue;
        }
        let entry = entry_for(schedule, id)?;
        let f = entry.demand.get(&v).ok_or_else(|| CombineError::MissingDemand {
            vertex: v,
            excluded: id.excluded.clone(),
            anchored: id.anchored.clone(),
        })?;
        total += f * &cell.measure();
    }
    Ok(total)
}

/// Builds an assignment on the domain of `lo` from per-cell certificates.
///
/// Every nonempty cell needs a schedule entry whose certificate verifies
/// against its demands and against the anchored set, every vertex needs a
/// covering sum of at least one, and the assembled result is re-verified
/// and trimmed to measure exactly one per vertex.
pub fn combine(
    g: &Graph,
    lo: &OffshootAssignment,
    schedule: &DemandSchedule,
) -> Result<Arborization, CombineError> {
    let table = cells(lo);
    let domain: BTreeSet<usize> = lo.domain().collect();
    for id in table.cells.keys() {
        let entry = entry_for(schedule, id)?;
        let live: BTreeSet<usize> = domain.difference(&id.excluded).copied().collect();
        for v in &live {
            if !entry.demand.contains_key(v) {
                return Err(CombineError::MissingDemand {
                    vertex: *v,
                    excluded: id.excluded.clone(),
                    anchored: id.anchored.clone(),
                });
            }
        }
        for v in entry.cert.keys() {
            if !live.contains(v) {
                return Err(CombineError::CertificateForExcluded {
                    vertex: *v,
                    excluded: id.excluded.clone(),
                    anchored: id.anchored.clone(),
                });
            }
        }
        let cert: Arborization = live
            .iter()
            .map(|&v| (v, entry.cert.get(&v).cloned().unwrap_or_else(IntervalSet::empty)))
            .collect();
        let bad = |source: Violation| CombineError::EntryInvalid {
            excluded: id.excluded.clone(),
            anchored: id.anchored.clone(),
            source,
        };
        verify(g, &cert, VerifyMode::Demand(&entry.demand)).map_err(bad)?;
        verify(g, &cert, VerifyMode::Anchored(&id.anchored)).map_err(bad)?;
    }
    for &v in &domain {
        let total = covering_lhs(v, lo, schedule)?;
        if total < Rational::one() {
            return Err(CombineError::CoveringShort { vertex: v, total });
        }
    }

    let mut result = Arborization::new();
    for &v in &domain {
        let mut s = IntervalSet::empty();
        for (id, cell) in &table.cells {
            if id.excluded.contains(&v) {
                continue;
            }
            let entry = entry_for(schedule, id)?;
            if let Some(psi) = entry.cert.get(&v) {
                s = s.union(&cell.transport(psi));
            }
        }
        result.insert(v, s);
    }
    let wrap = |source: Violation| CombineError::ResultInvalid { source };
    verify(g, &result, VerifyMode::Offshoot(lo)).map_err(wrap)?;
    let result = result.trim_to_unit().map_err(wrap)?;
    verify(g, &result, VerifyMode::Offshoot(lo)).map_err(wrap)?;
    Ok(result)
}
