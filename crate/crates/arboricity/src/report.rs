//! JSON report builders and parsers. Non-integer numbers are emitted as
//! exact "p/q" strings; all maps are key-sorted, so equal inputs always
//! serialize to identical bytes.

use crate::arborization::Arborization;
use crate::combine::OffshootAssignment;
use crate::discharging::{ChargeLedger, UnavoidabilityOutcome};
use crate::extend::ExtensionOutcome;
use crate::gadget::ConfigWitness;
use crate::graph::{to_graph6, Graph};
use crate::interval::IntervalSet;
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use crate::solvers::FractionalCover;
use serde_json::{json, Map, Value};

pub fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn interval_set_value(s: &IntervalSet) -> Value {
    Value::Array(
        s.intervals()
            .iter()
            .map(|(a, b)| json!([format_rational(a), format_rational(b)]))
            .collect(),
    )
}

pub fn arborization_value(phi: &Arborization) -> Value {
    let mut map = Map::new();
    for (v, s) in phi.iter() {
        map.insert(v.to_string(), interval_set_value(s));
    }
    Value::Object(map)
}

pub fn graph_value(g: &Graph) -> Value {
    json!({
        "vertices": g.n(),
        "edges": g.edge_count(),
        "average_degree": rational_value(&g.average_degree()),
        "graph6": to_graph6(g),
    })
}

pub fn cover_value(fc: &FractionalCover) -> Value {
    json!({
        "value": rational_value(&fc.value),
        "cover": fc
            .cover
            .iter()
            .map(|(set, w)| {
                json!({
                    "vertices": set.iter().copied().collect::<Vec<_>>(),
                    "weight": rational_value(w),
                })
            })
            .collect::<Vec<_>>(),
        "dual": fc.dual.iter().map(rational_value).collect::<Vec<_>>(),
        "iterations": fc.iterations,
        "pricing_bound": rational_value(&fc.pricing_bound),
        "cross_checked": fc.cross_checked,
    })
}

pub fn ledger_value(ledger: &ChargeLedger) -> Value {
    let charges = |cs: &[Rational]| -> Value {
        Value::Array(cs.iter().map(rational_value).collect())
    };
    let minimum = match ledger.minimum() {
        Some((v, c)) => json!({ "vertex": v, "charge": rational_value(c) }),
        None => Value::Null,
    };
    json!({
        "initial": charges(&ledger.initial),
        "final": charges(&ledger.final_charges),
        "transfers": ledger
            .transfers
            .iter()
            .map(|t| {
                json!({
                    "from": t.from,
                    "to": t.to,
                    "amount": rational_value(&t.amount),
                    "rule": t.rule,
                })
            })
            .collect::<Vec<_>>(),
        "total": rational_value(&ledger.total()),
        "minimum": minimum,
    })
}

pub fn witness_value(w: &ConfigWitness) -> Value {
    let mut roles = Map::new();
    for (name, &v) in &w.roles {
        roles.insert(name.clone(), json!(v));
    }
    json!({ "kind": w.kind.name(), "roles": Value::Object(roles) })
}

pub fn unavoidability_value(out: &UnavoidabilityOutcome) -> Value {
    match out {
        UnavoidabilityOutcome::VacuousAverage { average } => json!({
            "outcome": "vacuous",
            "average_degree": rational_value(average),
        }),
        UnavoidabilityOutcome::Confirmed { average, vertex, charge, witness, witness_count } => json!({
            "outcome": "confirmed",
            "average_degree": rational_value(average),
            "minimum_vertex": vertex,
            "minimum_charge": rational_value(charge),
            "witness": witness_value(witness),
            "witness_count": witness_count,
        }),
        UnavoidabilityOutcome::Counterexample { vertex, charge } => json!({
            "outcome": "counterexample",
            "vertex": vertex,
            "charge": rational_value(charge),
        }),
    }
}

pub fn offshoot_value(lo: &OffshootAssignment) -> Value {
    let mut map = Map::new();
    for v in lo.domain() {
        map.insert(
            v.to_string(),
            json!({
                "list": interval_set_value(lo.list(v).expect("domain vertex")),
                "offshoot": interval_set_value(lo.offshoot(v).expect("domain vertex")),
            }),
        );
    }
    Value::Object(map)
}

pub fn extension_value(out: &ExtensionOutcome) -> Value {
    let set_map = |m: &std::collections::BTreeMap<usize, IntervalSet>| -> Value {
        let mut obj = Map::new();
        for (v, s) in m {
            obj.insert(v.to_string(), interval_set_value(s));
        }
        Value::Object(obj)
    };
    let mut covering = Map::new();
    for (v, r) in &out.covering {
        covering.insert(v.to_string(), rational_value(r));
    }
    let mut big = Map::new();
    for (v, b) in &out.big {
        big.insert(v.to_string(), json!(b));
    }
    json!({
        "width": rational_value(&out.width),
        "assignment": arborization_value(&out.assignment),
        "lists": offshoot_value(&out.lists),
        "blocked": set_map(&out.blocked),
        "big_blocked": Value::Object(big),
        "covering": Value::Object(covering),
    })
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("expected a JSON object mapping vertex ids to interval lists")]
    NotAnObject,
    #[error("bad vertex key {0:?}")]
    BadVertex(String),
    #[error("interval entries must be [low, high] pairs of rational strings")]
    BadInterval,
    #[error(transparent)]
    BadRational(#[from] ParseRationalError),
}

fn parse_interval_set(v: &Value) -> Result<IntervalSet, ReportError> {
    let Value::Array(items) = v else {
        return Err(ReportError::BadInterval);
    };
    let mut pairs = Vec::new();
    for item in items {
        let Value::Array(pair) = item else {
            return Err(ReportError::BadInterval);
        };
        let [a, b] = pair.as_slice() else {
            return Err(ReportError::BadInterval);
        };
        let (Value::String(a), Value::String(b)) = (a, b) else {
            return Err(ReportError::BadInterval);
        };
        pairs.push((parse_rational(a)?, parse_rational(b)?));
    }
    Ok(IntervalSet::from_pairs(pairs))
}

/// Parses the output format of [`arborization_value`].
pub fn parse_arborization(v: &Value) -> Result<Arborization, ReportError> {
    let Value::Object(map) = v else {
        return Err(ReportError::NotAnObject);
    };
    let mut phi = Arborization::new();
    for (key, sets) in map {
        let vertex: usize =
            key.parse().map_err(|_| ReportError::BadVertex(key.clone()))?;
        phi.insert(vertex, parse_interval_set(sets)?);
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn arborization_round_trips_through_json() {
        let phi: Arborization = vec![
            (0, IntervalSet::interval(&rat(0, 1), &rat(1, 1))),
            (3, IntervalSet::from_pairs(vec![(rat(1, 2), rat(1, 1)), (rat(3, 2), rat(2, 1))])),
        ]
        .into_iter()
        .collect();
        let v = arborization_value(&phi);
        let back = parse_arborization(&v).unwrap();
        assert_eq!(phi, back);
    }

    #[test]
    fn serialization_is_deterministic() {
        let g = crate::graph::petersen();
        let a = serde_json::to_string(&graph_value(&g)).unwrap();
        let b = serde_json::to_string(&graph_value(&g)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integers_have_no_denominator() {
        assert_eq!(rational_value(&rat(4, 2)), Value::String("2".to_string()));
        assert_eq!(rational_value(&rat(5, 2)), Value::String("5/2".to_string()));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert_eq!(parse_arborization(&json!([1, 2])), Err(ReportError::NotAnObject));
        assert_eq!(
            parse_arborization(&json!({"x": []})),
            Err(ReportError::BadVertex("x".to_string()))
        );
        assert_eq!(parse_arborization(&json!({"0": [[1, 2]]})), Err(ReportError::BadInterval));
    }
}
