//! Charge redistribution on sparse graphs.
//!
//! Every vertex starts with its degree minus 10/3. Two transfer rules move
//! charge around without changing the total: every vertex sends 2/3 to each
//! degree-2 neighbor, and every heavy vertex sends 1/6 to each degree-3
//! neighbor. When the average degree is below 10/3 the total is negative,
//! so some vertex ends negative, and the case analysis shows such a vertex
//! always sits in one of four local configurations.

use crate::gadget::{validate_witness, ConfigKind, ConfigWitness};
use crate::graph::Graph;
use crate::rational::Rational;
use num::Zero;

/// Heavy: at least four neighbors of degree three or more, or degree at
/// least six. Exactly the complement of light.
pub fn is_heavy(g: &Graph, v: usize) -> bool {
    g.effective_degree(v) >= 4 || g.degree(v) >= 6
}

pub fn initial_charge(g: &Graph, v: usize) -> Rational {
    Rational::new((g.degree(v) as i64).into(), 1.into()) - Rational::new(10.into(), 3.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub amount: Rational,
    /// 1 = degree-2 support, 2 = heavy-to-degree-3 support
    pub rule: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLedger {
    pub initial: Vec<Rational>,
    pub final_charges: Vec<Rational>,
    pub transfers: Vec<Transfer>,
}

impl ChargeLedger {
    pub fn total(&self) -> Rational {
        self.initial.iter().sum()
    }

    pub fn minimum(&self) -> Option<(usize, &Rational)> {
        self.final_charges
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
    }
}

/// Applies both transfer rules and returns the full ledger. Total charge is
/// conserved exactly.
pub fn discharge(g: &Graph) -> ChargeLedger {
    let n = g.n();
    let initial: Vec<Rational> = (0..n).map(|v| initial_charge(g, v)).collect();
    let mut final_charges = initial.clone();
    let mut transfers = Vec::new();
    let two_thirds = Rational::new(2.into(), 3.into());
    let sixth = Rational::new(1.into(), 6.into());
    for v in 0..n {
        for u in g.neighbors(v) {
            if g.degree(u) == 2 {
                final_charges[v] = &final_charges[v] - &two_thirds;
                final_charges[u] = &final_charges[u] + &two_thirds;
                transfers.push(Transfer { from: v, to: u, amount: two_thirds.clone(), rule: 1 });
            }
        }
        if is_heavy(g, v) {
            assert!(g.degree(v) >= 4, "heavy vertices have degree at least four");
            for u in g.neighbors(v) {
                if g.degree(u) == 3 {
                    final_charges[v] = &final_charges[v] - &sixth;
                    final_charges[u] = &final_charges[u] + &sixth;
                    transfers.push(Transfer { from: v, to: u, amount: sixth.clone(), rule: 2 });
                }
            }
        }
    }
    let before: Rational = initial.iter().sum();
    let after: Rational = final_charges.iter().sum();
    assert_eq!(before, after, "transfers conserve total charge");
    ChargeLedger { initial, final_charges, transfers }
}

/// The local configuration guaranteed at a vertex of negative final charge,
/// when one of the four patterns is present. Mirrors the case analysis: a
/// negative vertex of degree 2 must have a degree-2 neighbor, a negative
/// vertex of degree 3 has two light neighbors or a degree-2 neighbor, and a
/// negative vertex of degree 4..=9 has at most two non-degree-2 neighbors.
pub fn configuration_at(g: &Graph, v: usize) -> Option<ConfigWitness> {
    let d = g.degree(v);
    if d <= 1 {
        return Some(ConfigWitness::new(ConfigKind::DegreeAtMostOne, vec![("v", v)]));
    }
    let deg2: Vec<usize> = g.neighbors(v).filter(|&u| g.degree(u) == 2).collect();
    if d == 2 {
        let &u = deg2.first()?;
        return Some(ConfigWitness::new(ConfigKind::AdjacentDegreeTwo, vec![("v", v), ("u", u)]));
    }
    if d == 3 {
        let light: Vec<usize> = g.neighbors(v).filter(|&u| g.is_light(u)).collect();
        if light.len() >= 2 {
            let (v1, v2) = (light[0], light[1]);
            let mut w = ConfigWitness::new(
                ConfigKind::DegreeThreeTwoLight,
                vec![("v", v), ("v1", v1), ("v2", v2)],
            );
            if let Some(z) = g.neighbors(v).find(|&u| u != v1 && u != v2) {
                w.roles.insert("z".to_string(), z);
            }
            debug_assert!(validate_witness(g, &w).is_ok());
            return Some(w);
        }
        if deg2.is_empty() {
            return None;
        }
        return Some(star_witness(g, v, &deg2));
    }
    if (4..=9).contains(&d) && g.effective_degree(v) <= 2 {
        return Some(star_witness(g, v, &deg2));
    }
    None
}

/// Builds the degree-2-star witness: up to seven degree-2 neighbors take
/// the u roles with their far ends primed, and the heavier neighbors take
/// x and y.
fn star_witness(g: &Graph, v: usize, deg2: &[usize]) -> ConfigWitness {
    let mut w = ConfigWitness::new(ConfigKind::EffectiveDegreeTwo, vec![("v", v)]);
    for (i, &u) in deg2.iter().take(7).enumerate() {
        w.roles.insert(format!("u{}", i + 1), u);
        if let Some(up) = g.neighbors(u).find(|&x| x != v) {
            w.roles.insert(format!("u{}'", i + 1), up);
        }
    }
    let heavier: Vec<usize> =
        g.neighbors(v).filter(|&u| g.degree(u) >= 3).collect();
    for (name, &x) in ["x", "y"].iter().zip(&heavier) {
        w.roles.insert(name.to_string(), x);
    }
    debug_assert!(validate_witness(g, &w).is_ok());
    w
}

/// All configurations found, one candidate per center vertex, ascending.
pub fn detect_configurations(g: &Graph) -> Vec<ConfigWitness> {
    (0..g.n()).filter_map(|v| configuration_at(g, v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnavoidabilityOutcome {
    /// average degree at least 10/3 (or no vertices): nothing to show
    VacuousAverage { average: Rational },
    /// a negative-charge vertex exists and carries a configuration
    Confirmed {
        average: Rational,
        vertex: usize,
        charge: Rational,
        witness: ConfigWitness,
        witness_count: usize,
    },
    /// a negative-charge vertex without any configuration: would disprove
    /// the unavoidability argument
    Counterexample { vertex: usize, charge: Rational },
}

/// Runs the discharge and checks that the minimum-charge vertex carries a
/// configuration whenever the average degree is below 10/3.
pub fn check_unavoidability(g: &Graph) -> UnavoidabilityOutcome {
    let average = g.average_degree();
    let bound = Rational::new(10.into(), 3.into());
    if g.n() == 0 || average >= bound {
        return UnavoidabilityOutcome::VacuousAverage { average };
    }
    let ledger = discharge(g);
    let (vertex, charge) = ledger.minimum().expect("nonempty graph");
    let charge = charge.clone();
    assert!(charge < Rational::zero(), "below-average total forces a negative vertex");
    match configuration_at(g, vertex) {
        Some(witness) => {
            validate_witness(g, &witness).expect("emitted witnesses validate");
            let witness_count = detect_configurations(g).len();
            UnavoidabilityOutcome::Confirmed { average, vertex, charge, witness, witness_count }
        }
        None => UnavoidabilityOutcome::Counterexample { vertex, charge },
    }
}

/// Maximum edge count of a planar graph with the given girth: every face
/// needs at least `girth` edges, so m <= girth/(girth-2) * (n-2). Only
/// defined for at least three vertices and girth at least three.
pub fn planar_girth_edge_bound(n: usize, girth: usize) -> Option<usize> {
    if n < 3 || girth < 3 {
        return None;
    }
    Some(girth * (n - 2) / (girth - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::gadget_graph;
    use crate::graph::{complete, cycle, dodecahedron, path, petersen, Graph};
    use crate::rational::{int, rat};

    #[test]
    fn cycle_charges_stay_negative() {
        let g = cycle(9);
        let ledger = discharge(&g);
        for v in 0..9 {
            assert_eq!(ledger.initial[v], rat(-4, 3));
            assert_eq!(ledger.final_charges[v], rat(-4, 3));
        }
        match check_unavoidability(&g) {
            UnavoidabilityOutcome::Confirmed { witness, .. } => {
                assert_eq!(witness.kind, ConfigKind::AdjacentDegreeTwo);
            }
            other => panic!("expected confirmation, got {other:?}"),
        }
    }

    #[test]
    fn star_host_confirms_with_a_full_ledger() {
        let (g, _) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        let ledger = discharge(&g);
        assert_eq!(ledger.total(), g_total(&g));
        // center: degree 9, sends 2/3 to seven degree-2 neighbors and 1/6
        // to both degree-3 neighbors
        assert_eq!(ledger.final_charges[0], rat(2, 3));
        // degree-2 star arms break even; their far leaves go to -3
        assert_eq!(ledger.final_charges[1], int(0));
        assert_eq!(ledger.final_charges[8], int(-3));
        let configs = detect_configurations(&g);
        assert!(configs
            .iter()
            .any(|w| w.kind == ConfigKind::EffectiveDegreeTwo && w.center() == 0));
        assert!(matches!(check_unavoidability(&g), UnavoidabilityOutcome::Confirmed { .. }));
    }

    fn g_total(g: &Graph) -> Rational {
        (0..g.n()).map(|v| initial_charge(g, v)).sum()
    }

    #[test]
    fn path_host_detects_the_light_pair() {
        let (g, _) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        let configs = detect_configurations(&g);
        let at_center = configs.iter().find(|w| w.center() == 0).unwrap();
        assert_eq!(at_center.kind, ConfigKind::DegreeThreeTwoLight);
        assert_eq!(at_center.role("v1"), Some(1));
        assert_eq!(at_center.role("v2"), Some(2));
        assert_eq!(at_center.role("z"), Some(3));
    }

    #[test]
    fn dense_graphs_are_vacuous() {
        assert!(matches!(check_unavoidability(&complete(5)), UnavoidabilityOutcome::VacuousAverage { .. }));
        assert!(matches!(check_unavoidability(&Graph::new(0)), UnavoidabilityOutcome::VacuousAverage { .. }));
    }

    #[test]
    fn sparse_named_graphs_confirm() {
        for g in [dodecahedron(), petersen(), path(7), cycle(5)] {
            assert!(matches!(check_unavoidability(&g), UnavoidabilityOutcome::Confirmed { .. }));
        }
    }

    #[test]
    fn heavy_hub_neighbors_leave_no_configuration_at_center() {
        // center 0 adjacent to three hubs; each hub picks up five extra
        // leaves, making it degree 6 and heavy
        let mut g = Graph::new(19);
        let mut next = 4;
        for hub in 1..=3 {
            g.add_edge(0, hub).unwrap();
            for _ in 0..5 {
                g.add_edge(hub, next).unwrap();
                next += 1;
            }
        }
        assert_eq!(configuration_at(&g, 0), None);
        // the check still confirms through the leaves
        assert!(matches!(check_unavoidability(&g), UnavoidabilityOutcome::Confirmed { .. }));
    }

    #[test]
    fn big_star_center_has_no_configuration() {
        let mut g = Graph::new(11);
        for leaf in 1..=10 {
            g.add_edge(0, leaf).unwrap();
        }
        assert_eq!(configuration_at(&g, 0), None);
        assert!(matches!(check_unavoidability(&g), UnavoidabilityOutcome::Confirmed { .. }));
    }

    #[test]
    fn transfers_are_logged_with_rules() {
        let g = path(4);
        let ledger = discharge(&g);
        // ends send 2/3 to their degree-2 neighbors, the middle pair swap
        assert!(ledger.transfers.iter().all(|t| t.rule == 1));
        assert_eq!(ledger.transfers.len(), 4);
        assert_eq!(ledger.total(), g_total(&g));
    }

    #[test]
    fn planar_girth_bound_examples() {
        // triangulations: 3n - 6
        assert_eq!(planar_girth_edge_bound(12, 3), Some(30));
        // girth five on 20 vertices: exactly the dodecahedron's edge count
        assert_eq!(planar_girth_edge_bound(20, 5), Some(30));
        assert_eq!(planar_girth_edge_bound(2, 5), None);
    }
}
