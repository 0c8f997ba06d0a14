//! Reducible-configuration witnesses and fixed host graphs exhibiting them.
//!
//! A witness names a configuration kind plus the vertices playing each role.
//! The two richer kinds come with hand-built girth-5 hosts of average degree
//! below 10/3, used to exercise the extension procedures end to end.

use crate::graph::Graph;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConfigKind {
    /// a vertex of degree at most one
    DegreeAtMostOne,
    /// two adjacent vertices of degree two
    AdjacentDegreeTwo,
    /// a vertex of degree 3..=9 with at most two neighbors of degree three
    /// or more
    EffectiveDegreeTwo,
    /// a degree-three vertex with at least two light neighbors (degree at
    /// most five, at most three neighbors of degree three or more)
    DegreeThreeTwoLight,
}

impl ConfigKind {
    pub fn name(self) -> &'static str {
        match self {
            ConfigKind::DegreeAtMostOne => "degree-at-most-one",
            ConfigKind::AdjacentDegreeTwo => "adjacent-degree-two",
            ConfigKind::EffectiveDegreeTwo => "effective-degree-two",
            ConfigKind::DegreeThreeTwoLight => "degree-three-two-light",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigWitness {
    pub kind: ConfigKind,
    /// role name to vertex; "v" is always present
    pub roles: BTreeMap<String, usize>,
}

impl ConfigWitness {
    pub fn new(kind: ConfigKind, roles: Vec<(&str, usize)>) -> Self {
        ConfigWitness { kind, roles: roles.into_iter().map(|(k, v)| (k.to_string(), v)).collect() }
    }

    pub fn role(&self, name: &str) -> Option<usize> {
        self.roles.get(name).copied()
    }

    pub fn center(&self) -> usize {
        self.roles["v"]
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness lacks role {role:?}")]
    MissingRole { role: String },
    #[error("role {role:?} points at out-of-range vertex {vertex}")]
    RoleOutOfRange { role: String, vertex: usize },
    #[error("vertex {vertex} in role {role:?} has degree {degree}, which breaks the pattern")]
    WrongDegree { role: String, vertex: usize, degree: usize },
    #[error("roles {a:?} and {b:?} must name adjacent vertices")]
    NotAdjacent { a: String, b: String },
    #[error("roles {a:?} and {b:?} must name distinct vertices")]
    NotDistinct { a: String, b: String },
    #[error("vertex {vertex} in role {role:?} has {count} heavy neighbors, too many for the pattern")]
    TooManyHeavyNeighbors { role: String, vertex: usize, count: usize },
    #[error("vertex {vertex} in role {role:?} is not light")]
    NotLight { role: String, vertex: usize },
}

fn need(w: &ConfigWitness, g: &Graph, role: &str) -> Result<usize, WitnessError> {
    let v = w.role(role).ok_or_else(|| WitnessError::MissingRole { role: role.to_string() })?;
    if v >= g.n() {
        return Err(WitnessError::RoleOutOfRange { role: role.to_string(), vertex: v });
    }
    Ok(v)
}

fn need_edge(g: &Graph, a: (&str, usize), b: (&str, usize)) -> Result<(), WitnessError> {
    if a.1 == b.1 {
        return Err(WitnessError::NotDistinct { a: a.0.to_string(), b: b.0.to_string() });
    }
    if !g.has_edge(a.1, b.1) {
        return Err(WitnessError::NotAdjacent { a: a.0.to_string(), b: b.0.to_string() });
    }
    Ok(())
}

/// Checks the structural pattern a witness claims. Optional roles are
/// validated only when present.
pub fn validate_witness(g: &Graph, w: &ConfigWitness) -> Result<(), WitnessError> {
    let v = need(w, g, "v")?;
    let deg = g.degree(v);
    let wrong = |role: &str, vertex: usize| WitnessError::WrongDegree {
        role: role.to_string(),
        vertex,
        degree: g.degree(vertex),
    };
    match w.kind {
        ConfigKind::DegreeAtMostOne => {
            if deg > 1 {
                return Err(wrong("v", v));
            }
        }
        ConfigKind::AdjacentDegreeTwo => {
            let u = need(w, g, "u")?;
            if deg != 2 {
                return Err(wrong("v", v));
            }
            if g.degree(u) != 2 {
                return Err(wrong("u", u));
            }
            need_edge(g, ("v", v), ("u", u))?;
        }
        ConfigKind::EffectiveDegreeTwo => {
            if !(3..=9).contains(&deg) {
                return Err(wrong("v", v));
            }
            let eff = g.effective_degree(v);
            if eff > 2 {
                return Err(WitnessError::TooManyHeavyNeighbors {
                    role: "v".to_string(),
                    vertex: v,
                    count: eff,
                });
            }
            for i in 1..=7usize {
                let role = format!("u{i}");
                if w.role(&role).is_none() {
                    continue;
                }
                let u = need(w, g, &role)?;
                if g.degree(u) != 2 {
                    return Err(wrong(&role, u));
                }
                need_edge(g, ("v", v), (&role, u))?;
                let prole = format!("u{i}'");
                if w.role(&prole).is_some() {
                    let up = need(w, g, &prole)?;
                    need_edge(g, (&role, u), (&prole, up))?;
                    if up == v {
                        return Err(WitnessError::NotDistinct { a: prole, b: "v".to_string() });
                    }
                }
            }
            for name in ["x", "y"] {
                if w.role(name).is_some() {
                    let x = need(w, g, name)?;
                    need_edge(g, ("v", v), (name, x))?;
                }
            }
        }
        ConfigKind::DegreeThreeTwoLight => {
            if deg != 3 {
                return Err(wrong("v", v));
            }
            let v1 = need(w, g, "v1")?;
            let v2 = need(w, g, "v2")?;
            if v1 == v2 {
                return Err(WitnessError::NotDistinct { a: "v1".to_string(), b: "v2".to_string() });
            }
            for (name, vi) in [("v1", v1), ("v2", v2)] {
                need_edge(g, ("v", v), (name, vi))?;
                if !g.is_light(vi) {
                    return Err(WitnessError::NotLight { role: name.to_string(), vertex: vi });
                }
            }
            if w.role("z").is_some() {
                let z = need(w, g, "z")?;
                need_edge(g, ("v", v), ("z", z))?;
            }
        }
    }
    Ok(())
}

/// A fixed host exhibiting the witnessed configuration. The two richer
/// kinds return girth-5 hosts with average degree below 10/3 whose central
/// pattern is exact: the star host's center has degree 9 with seven
/// degree-2 neighbors, the path host's center has two degree-5 light
/// neighbors, each with four degree-2 or degree-3 neighbors.
pub fn gadget_graph(kind: ConfigKind) -> (Graph, ConfigWitness) {
    match kind {
        ConfigKind::DegreeAtMostOne => {
            let g = crate::graph::path(2);
            (g, ConfigWitness::new(kind, vec![("v", 1)]))
        }
        ConfigKind::AdjacentDegreeTwo => {
            let g = crate::graph::path(4);
            (g, ConfigWitness::new(kind, vec![("v", 1), ("u", 2)]))
        }
        ConfigKind::EffectiveDegreeTwo => star_host(),
        ConfigKind::DegreeThreeTwoLight => path_host(),
    }
}

/// 21 vertices: center 0 with seven degree-2 neighbors 1..=7 (their far
/// ends 8..=14), two degree-3 neighbors 15 (x) and 16 (y) joined around the
/// back through 17-18, and a pendant leaf on each of x and y. The unique
/// cycle 0-15-17-18-16 has length five.
fn star_host() -> (Graph, ConfigWitness) {
    let mut g = Graph::new(21);
    for i in 1..=7 {
        g.add_edge(0, i).unwrap();
        g.add_edge(i, i + 7).unwrap();
    }
    g.add_edge(0, 15).unwrap();
    g.add_edge(0, 16).unwrap();
    g.add_edge(15, 17).unwrap();
    g.add_edge(17, 18).unwrap();
    g.add_edge(18, 16).unwrap();
    g.add_edge(15, 19).unwrap();
    g.add_edge(16, 20).unwrap();
    let mut w = ConfigWitness::new(
        ConfigKind::EffectiveDegreeTwo,
        vec![("v", 0), ("x", 15), ("y", 16)],
    );
    for i in 1..=7 {
        w.roles.insert(format!("u{i}"), i);
        w.roles.insert(format!("u{i}'"), i + 7);
    }
    (g, w)
}

/// 24 vertices: center 0 adjacent to two degree-5 vertices 1 and 2 and a
/// leaf 3. Each side i has a degree-2 pair (u, w with far ends u', w') and
/// two degree-3 vertices x, y joined around the back through an r-s path,
/// plus pendant leaves keeping x and y at degree three. Both five-cycles
/// avoid the center, so the girth is five and vertices 1, 2 are light.
fn path_host() -> (Graph, ConfigWitness) {
    let mut g = Graph::new(24);
    for (a, b) in [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (4, 12),
        (5, 13),
        (2, 8),
        (2, 9),
        (2, 10),
        (2, 11),
        (8, 14),
        (9, 15),
        (6, 16),
        (16, 17),
        (17, 7),
        (10, 18),
        (18, 19),
        (19, 11),
        (6, 20),
        (7, 21),
        (10, 22),
        (11, 23),
    ] {
        g.add_edge(a, b).unwrap();
    }
    let w = ConfigWitness::new(
        ConfigKind::DegreeThreeTwoLight,
        vec![
            ("v", 0),
            ("v1", 1),
            ("v2", 2),
            ("z", 3),
            ("u1", 4),
            ("w1", 5),
            ("x1", 6),
            ("y1", 7),
            ("u2", 8),
            ("w2", 9),
            ("x2", 10),
            ("y2", 11),
            ("u1'", 12),
            ("w1'", 13),
            ("u2'", 14),
            ("w2'", 15),
        ],
    );
    (g, w)
}

/// Rebuilds the full role set from the graph, keeping only the identifying
/// picks (the center and, for the degree-three kind, the two chosen light
/// neighbors). Detection emits minimal witnesses; the extension procedures
/// need every neighbor of the re-assigned vertices named, so this fills
/// arm, prime, and outer roles in ascending vertex order. Idempotent on
/// witnesses that already follow that order.
pub fn elaborate_witness(g: &Graph, w: &ConfigWitness) -> ConfigWitness {
    match w.kind {
        ConfigKind::DegreeAtMostOne | ConfigKind::AdjacentDegreeTwo => w.clone(),
        ConfigKind::EffectiveDegreeTwo => {
            let v = w.center();
            let mut out = ConfigWitness::new(w.kind, vec![("v", v)]);
            let mut taken = BTreeSet::new();
            let deg2: Vec<usize> = g.neighbors(v).filter(|&u| g.degree(u) == 2).collect();
            for (i, &u) in deg2.iter().take(7).enumerate() {
                out.roles.insert(format!("u{}", i + 1), u);
                taken.insert(u);
                if let Some(far) = g.neighbors(u).find(|&x| x != v) {
                    out.roles.insert(format!("u{}'", i + 1), far);
                }
            }
            // heavier neighbors first, then any leftover light ones
            let outer: Vec<usize> = g
                .neighbors(v)
                .filter(|&u| g.degree(u) >= 3)
                .chain(g.neighbors(v).filter(|&u| g.degree(u) < 3 && !taken.contains(&u)))
                .collect();
            for (name, &x) in ["x", "y"].iter().zip(&outer) {
                out.roles.insert(name.to_string(), x);
            }
            out
        }
        ConfigKind::DegreeThreeTwoLight => {
            let v = w.center();
            let (v1, v2) = match (w.role("v1"), w.role("v2")) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    let light: Vec<usize> = g.neighbors(v).filter(|&u| g.is_light(u)).collect();
                    if light.len() < 2 {
                        return w.clone();
                    }
                    (light[0], light[1])
                }
            };
            let mut out =
                ConfigWitness::new(w.kind, vec![("v", v), ("v1", v1), ("v2", v2)]);
            if let Some(z) = g.neighbors(v).find(|&u| u != v1 && u != v2) {
                out.roles.insert("z".to_string(), z);
            }
            for (i, vi) in [(1usize, v1), (2usize, v2)] {
                let mut arm_slots = [format!("u{i}"), format!("w{i}")].into_iter();
                let mut outer_slots = [format!("x{i}"), format!("y{i}")].into_iter();
                let mut rest = Vec::new();
                for u in g.neighbors(vi).filter(|&u| u != v) {
                    if g.degree(u) == 2 {
                        if let Some(name) = arm_slots.next() {
                            if let Some(far) = g.neighbors(u).find(|&x| x != vi) {
                                out.roles.insert(format!("{name}'"), far);
                            }
                            out.roles.insert(name, u);
                            continue;
                        }
                    }
                    rest.push(u);
                }
                for x in rest {
                    if let Some(name) = outer_slots.next() {
                        out.roles.insert(name, x);
                    }
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn star_host_shape() {
        let (g, w) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        assert_eq!(g.n(), 21);
        assert_eq!(g.edge_count(), 21);
        assert_eq!(g.degree(0), 9);
        assert_eq!(g.effective_degree(0), 2);
        for i in 1..=7 {
            assert_eq!(g.degree(i), 2);
        }
        assert_eq!(g.degree(15), 3);
        assert_eq!(g.degree(16), 3);
        assert_eq!(g.girth(), Some(5));
        assert!(g.is_connected());
        assert!(g.average_degree() < rat(10, 3));
        validate_witness(&g, &w).unwrap();
    }

    #[test]
    fn path_host_shape() {
        let (g, w) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        assert_eq!(g.n(), 24);
        assert_eq!(g.edge_count(), 25);
        assert_eq!(g.degree(0), 3);
        for vi in [1, 2] {
            assert_eq!(g.degree(vi), 5);
            assert!(g.is_light(vi));
        }
        for u in [4, 5, 8, 9, 16, 17, 18, 19] {
            assert_eq!(g.degree(u), 2);
        }
        for x in [6, 7, 10, 11] {
            assert_eq!(g.degree(x), 3);
        }
        assert_eq!(g.girth(), Some(5));
        assert!(g.is_connected());
        assert!(g.average_degree() < rat(10, 3));
        validate_witness(&g, &w).unwrap();
    }

    #[test]
    fn small_hosts_validate() {
        for kind in [ConfigKind::DegreeAtMostOne, ConfigKind::AdjacentDegreeTwo] {
            let (g, w) = gadget_graph(kind);
            validate_witness(&g, &w).unwrap();
        }
    }

    #[test]
    fn validation_catches_broken_patterns() {
        // vertex 8 has degree 1, outside the 3..=9 window
        let (g, mut w) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        w.roles.insert("v".into(), 8);
        assert!(matches!(validate_witness(&g, &w), Err(WitnessError::WrongDegree { .. })));
        // endpoint 0 of the path has degree 1, not 2
        let (g, mut w) = gadget_graph(ConfigKind::AdjacentDegreeTwo);
        w.roles.insert("u".into(), 0);
        assert!(matches!(validate_witness(&g, &w), Err(WitnessError::WrongDegree { .. })));
    }

    #[test]
    fn elaboration_recovers_star_host_roles() {
        let (g, full) = gadget_graph(ConfigKind::EffectiveDegreeTwo);
        let minimal = ConfigWitness::new(ConfigKind::EffectiveDegreeTwo, vec![("v", 0)]);
        let built = elaborate_witness(&g, &minimal);
        assert_eq!(built, full);
        assert_eq!(elaborate_witness(&g, &full), full);
    }

    #[test]
    fn elaboration_recovers_path_host_roles() {
        let (g, full) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        let minimal = ConfigWitness::new(
            ConfigKind::DegreeThreeTwoLight,
            vec![("v", 0), ("v1", 1), ("v2", 2)],
        );
        let built = elaborate_witness(&g, &minimal);
        assert_eq!(built, full);
        validate_witness(&g, &built).unwrap();
    }

    #[test]
    fn elaboration_derives_light_sides_when_unnamed() {
        let (g, _) = gadget_graph(ConfigKind::DegreeThreeTwoLight);
        let bare = ConfigWitness::new(ConfigKind::DegreeThreeTwoLight, vec![("v", 0)]);
        let built = elaborate_witness(&g, &bare);
        assert_eq!(built.role("v1"), Some(1));
        assert_eq!(built.role("v2"), Some(2));
        assert_eq!(built.role("z"), Some(3));
    }
}
