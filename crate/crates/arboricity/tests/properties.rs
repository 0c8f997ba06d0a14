//! Randomized laws for the interval-set algebra and the graph encodings.
//!
//! Every arithmetic fact here is checked with exact rationals; a failing case
//! shrinks to a minimal counterexample.

use arboricity::corpus::canonical_key;
use arboricity::graph::{from_adjacency_text, from_graph6, to_adjacency_text, to_graph6};
use arboricity::interval::atoms;
use arboricity::rational::{int, rat};
use arboricity::{Graph, IntervalSet, Rational};
use num::Zero;
use proptest::prelude::*;

/// Interval sets with eighth-integer endpoints inside `[0, 8)`.
fn arb_set() -> impl Strategy<Value = IntervalSet> {
    proptest::collection::vec((0i64..56, 1i64..=12), 0..5).prop_map(|pieces| {
        IntervalSet::from_pairs(
            pieces
                .into_iter()
                .map(|(a, len)| (rat(a, 8), rat((a + len).min(64), 8))),
        )
    })
}

/// Interval sets with twelfth-integer endpoints inside `[0, 1)`.
fn arb_unit_set() -> impl Strategy<Value = IntervalSet> {
    proptest::collection::vec((0i64..12, 1i64..=6), 0..4).prop_map(|pieces| {
        IntervalSet::from_pairs(
            pieces
                .into_iter()
                .map(|(a, len)| (rat(a, 12), rat((a + len).min(12), 12))),
        )
    })
}

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if bits[k] {
                g.add_edge(u, v).unwrap();
            }
            k += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

proptest! {
    #[test]
    fn union_and_intersection_share_measure(a in arb_set(), b in arb_set()) {
        let lhs = a.measure() + b.measure();
        let rhs = a.union(&b).measure() + a.intersect(&b).measure();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_and_intersection_partition(a in arb_set(), b in arb_set()) {
        let diff = a.difference(&b);
        let both = a.intersect(&b);
        prop_assert!(diff.is_disjoint_from(&both));
        prop_assert_eq!(diff.union(&both), a.clone());
        prop_assert_eq!(diff.measure() + both.measure(), a.measure());
    }

    #[test]
    fn difference_agrees_with_complement(a in arb_set(), b in arb_set()) {
        // every generated set lives inside [0, 8)
        let width = int(8);
        prop_assert_eq!(a.difference(&b), a.intersect(&b.complement_within(&width)));
    }

    #[test]
    fn complement_is_an_involution(a in arb_set()) {
        let width = int(8);
        let c = a.complement_within(&width);
        prop_assert!(a.is_disjoint_from(&c));
        prop_assert_eq!(a.measure() + c.measure(), width.clone());
        prop_assert_eq!(c.complement_within(&width), a);
    }

    #[test]
    fn subset_means_empty_difference(a in arb_set(), b in arb_set()) {
        prop_assert_eq!(a.is_subset_of(&b), a.difference(&b).is_empty());
        prop_assert!(a.intersect(&b).is_subset_of(&a));
        prop_assert!(a.is_subset_of(&a.union(&b)));
    }

    #[test]
    fn disjoint_means_empty_intersection(a in arb_set(), b in arb_set()) {
        prop_assert_eq!(a.is_disjoint_from(&b), a.intersect(&b).is_empty());
        prop_assert_eq!(a.is_disjoint_from(&b), b.is_disjoint_from(&a));
    }

    #[test]
    fn union_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(
            a.intersect(&b.union(&c)),
            a.intersect(&b).union(&a.intersect(&c))
        );
    }

    #[test]
    fn prefix_takes_exactly_the_requested_measure(a in arb_set(), k in 0i64..=8) {
        let m = a.measure() * rat(k, 8);
        let p = a.prefix(&m);
        prop_assert_eq!(p.measure(), m);
        prop_assert!(p.is_subset_of(&a));
        prop_assert_eq!(a.prefix(&a.measure()), a.clone());
        prop_assert!(a.prefix(&Rational::zero()).is_empty());
    }

    #[test]
    fn prefix_is_monotone(a in arb_set(), j in 0i64..=8, k in 0i64..=8) {
        let (lo, hi) = (j.min(k), j.max(k));
        let small = a.prefix(&(a.measure() * rat(lo, 8)));
        let large = a.prefix(&(a.measure() * rat(hi, 8)));
        prop_assert!(small.is_subset_of(&large));
    }

    #[test]
    fn transport_scales_measure(a in arb_set(), psi in arb_unit_set()) {
        let image = a.transport(&psi);
        prop_assert_eq!(image.measure(), a.measure() * psi.measure());
        prop_assert!(image.is_subset_of(&a));
        let full = IntervalSet::interval(&Rational::zero(), &int(1));
        prop_assert_eq!(a.transport(&full), a.clone());
    }

    #[test]
    fn transport_commutes_with_the_lattice(
        a in arb_set(),
        p in arb_unit_set(),
        q in arb_unit_set(),
    ) {
        prop_assert_eq!(a.transport(&p.union(&q)), a.transport(&p).union(&a.transport(&q)));
        prop_assert_eq!(
            a.transport(&p.intersect(&q)),
            a.transport(&p).intersect(&a.transport(&q))
        );
        let images_disjoint = a.transport(&p).is_disjoint_from(&a.transport(&q));
        prop_assert_eq!(images_disjoint, p.is_disjoint_from(&q) || a.measure().is_zero());
    }

    #[test]
    fn atoms_partition_the_family_union(family in proptest::collection::vec(arb_set(), 0..4)) {
        let part = atoms(&family);
        let mut whole = IntervalSet::empty();
        for s in &family {
            whole = whole.union(s);
        }
        let mut rebuilt = IntervalSet::empty();
        for (i, atom) in part.atoms.iter().enumerate() {
            prop_assert!(!atom.set.is_empty());
            prop_assert!(!atom.members.is_empty());
            for other in &part.atoms[i + 1..] {
                prop_assert!(atom.set.is_disjoint_from(&other.set));
            }
            for (j, s) in family.iter().enumerate() {
                if atom.members.contains(&j) {
                    prop_assert!(atom.set.is_subset_of(s));
                } else {
                    prop_assert!(atom.set.is_disjoint_from(s));
                }
            }
            rebuilt = rebuilt.union(&atom.set);
        }
        prop_assert_eq!(rebuilt, whole);
        for (j, s) in family.iter().enumerate() {
            let mut from_atoms = IntervalSet::empty();
            for atom in &part.atoms {
                if atom.members.contains(&j) {
                    from_atoms = from_atoms.union(&atom.set);
                }
            }
            prop_assert_eq!(from_atoms, s.clone());
        }
    }

    #[test]
    fn graph6_round_trips(g in arb_graph(9)) {
        let text = to_graph6(&g);
        let back = from_graph6(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn adjacency_text_round_trips(g in arb_graph(9)) {
        let text = to_adjacency_text(&g);
        let back = from_adjacency_text(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn canonical_key_ignores_vertex_labels(
        g in arb_graph(7),
        salt in any::<u64>(),
    ) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // cheap seeded shuffle; any permutation must preserve the key
        for i in (1..n).rev() {
            let j = (salt.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(i as u64)
                % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let mut h = Graph::new(n);
        for (u, v) in g.edges() {
            h.add_edge(perm[u], perm[v]).unwrap();
        }
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
    }
}
