//! Finite unions of half-open rational intervals.
//!
//! Every set is kept in canonical form: intervals `[a, b)` with `a < b`, sorted,
//! pairwise disjoint and non-adjacent. All boolean operations, measures and the
//! transport map are exact. Half-open intervals make the algebra closed: unions,
//! intersections, differences and complements of these sets are again such sets,
//! and measure bookkeeping never meets a boundary case.

use crate::rational::{format_rational, parse_rational, Rational};
use num::Zero;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSet {
    /// Canonical: sorted, `a < b`, disjoint, non-adjacent.
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// Single interval `[a, b)`; empty when `a >= b`.
    pub fn interval(a: &Rational, b: &Rational) -> Self {
        if a < b {
            IntervalSet { intervals: vec![(a.clone(), b.clone())] }
        } else {
            IntervalSet::empty()
        }
    }

    /// Canonicalizes an arbitrary list of endpoint pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(pairs: I) -> Self {
        let mut v: Vec<(Rational, Rational)> =
            pairs.into_iter().filter(|(a, b)| a < b).collect();
        v.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                // merge overlapping and exactly-adjacent pieces
                Some((_, pb)) if *pb >= a => {
                    if *pb < b {
                        *pb = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn measure(&self) -> Rational {
        let mut m = Rational::zero();
        for (a, b) in &self.intervals {
            m += b - a;
        }
        m
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_pairs(
            self.intervals.iter().chain(other.intervals.iter()).cloned(),
        )
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = &self.intervals[i];
            let (a2, b2) = &other.intervals[j];
            let lo = if a1 > a2 { a1 } else { a2 };
            let hi = if b1 < b2 { b1 } else { b2 };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces are already sorted and disjoint but may be adjacent
        IntervalSet::from_pairs(out)
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            let mut lo = a.clone();
            for (c, d) in &other.intervals {
                if d <= &lo {
                    continue;
                }
                if c >= b {
                    break;
                }
                if c > &lo {
                    out.push((lo, c.clone()));
                }
                lo = if d < b { d.clone() } else { b.clone() };
                if &lo >= b {
                    break;
                }
            }
            if &lo < b {
                out.push((lo, b.clone()));
            }
        }
        IntervalSet { intervals: out }
    }

    /// Complement within the ambient interval `[0, width)`.
    pub fn complement_within(&self, width: &Rational) -> IntervalSet {
        IntervalSet::interval(&Rational::zero(), width).difference(self)
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Earliest piece of the set with measure exactly `m`.
    /// Panics if `m` is negative or exceeds the total measure.
    pub fn prefix(&self, m: &Rational) -> IntervalSet {
        assert!(m >= &Rational::zero(), "negative prefix");
        assert!(m <= &self.measure(), "prefix longer than the set");
        self.slice_by_measure(&Rational::zero(), m)
    }

    /// The part of the set between measure-offsets `lo` and `hi` from its left end.
    fn slice_by_measure(&self, lo: &Rational, hi: &Rational) -> IntervalSet {
        let mut out = Vec::new();
        let mut seen = Rational::zero();
        for (a, b) in &self.intervals {
            let len = b - a;
            let next = &seen + &len;
            // overlap of [seen, next) with [lo, hi), shifted into [a, b)
            let s = if lo > &seen { lo.clone() } else { seen.clone() };
            let e = if hi < &next { hi.clone() } else { next.clone() };
            if s < e {
                out.push((a + (&s - &seen), a + (&e - &seen)));
            }
            seen = next;
            if &seen >= hi {
                break;
            }
        }
        IntervalSet::from_pairs(out)
    }

    /// Order-preserving measure-scaling image of `psi` (a subset of `[0, 1)`)
    /// inside this set: the point at fraction `t` of `psi` lands at
    /// measure-offset `t * measure(self)`. Intersections and unions commute
    /// with the map, so level structure is carried over verbatim.
    pub fn transport(&self, psi: &IntervalSet) -> IntervalSet {
        let m = self.measure();
        if m.is_zero() {
            return IntervalSet::empty();
        }
        let mut out = IntervalSet::empty();
        for (a, b) in &psi.intervals {
            debug_assert!(a >= &Rational::zero() && b <= &num::one());
            out = out.union(&self.slice_by_measure(&(a * &m), &(b * &m)));
        }
        out
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(a, b)| format!("{}..{}", format_rational(a), format_rational(b)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseIntervalSetError {
    #[error("malformed interval {0:?}, expected \"a..b\"")]
    Malformed(String),
    #[error("bad endpoint in {0:?}: {1}")]
    Endpoint(String, crate::rational::ParseRationalError),
}

impl FromStr for IntervalSet {
    type Err = ParseIntervalSetError;

    /// Parses the textual form `a..b, c..d`. An empty string is the empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (a, b) = part
                .split_once("..")
                .ok_or_else(|| ParseIntervalSetError::Malformed(part.to_string()))?;
            let lo = parse_rational(a)
                .map_err(|e| ParseIntervalSetError::Endpoint(part.to_string(), e))?;
            let hi = parse_rational(b)
                .map_err(|e| ParseIntervalSetError::Endpoint(part.to_string(), e))?;
            pairs.push((lo, hi));
        }
        Ok(IntervalSet::from_pairs(pairs))
    }
}

/// One atom of a family of interval sets: a maximal region on which membership
/// is constant. `members` lists the family indices whose set contains the atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub set: IntervalSet,
    pub members: Vec<usize>,
}

/// Partition of the union of a family into atoms, ordered by leftmost point.
/// Atoms are pairwise disjoint, their union is the union of the family, and
/// each family member is exactly the union of the atoms listing it.
#[derive(Debug, Clone)]
pub struct AtomPartition {
    pub atoms: Vec<Atom>,
}

pub fn atoms(family: &[IntervalSet]) -> AtomPartition {
    let mut cuts: Vec<Rational> = Vec::new();
    for s in family {
        for (a, b) in s.intervals() {
            cuts.push(a.clone());
            cuts.push(b.clone());
        }
    }
    cuts.sort();
    cuts.dedup();
    // group elementary segments by membership vector
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<(Rational, Rational)>> =
        std::collections::BTreeMap::new();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        // membership is constant on [a, b) because no set boundary lies inside
        let members: Vec<usize> = family
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains_point(a))
            .map(|(i, _)| i)
            .collect();
        if !members.is_empty() {
            groups.entry(members).or_default().push((a.clone(), b.clone()));
        }
    }
    let mut atoms: Vec<Atom> = groups
        .into_iter()
        .map(|(members, pairs)| Atom { set: IntervalSet::from_pairs(pairs), members })
        .collect();
    atoms.sort_by(|x, y| x.set.intervals()[0].cmp(&y.set.intervals()[0]));
    AtomPartition { atoms }
}
