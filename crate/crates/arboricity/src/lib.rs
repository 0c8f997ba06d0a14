//! Exact toolkit for vertex-arboricity invariants.
//!
//! Everything here is computed over arbitrary-precision rationals: induced-forest
//! cover LPs solved by an exact simplex with column generation, fractional
//! arborizations represented as finite unions of half-open rational intervals,
//! a cell-based combiner that assembles arborizations from per-cell demand
//! schedules, extension procedures for two reducible configurations, and a
//! discharging engine for sparse graphs.
//!
//! ```
//! use arboricity::arborization::{verify, VerifyMode};
//! use arboricity::graph::named_graph;
//! use arboricity::rational::rat;
//! use arboricity::solvers::{arborization_from_cover, fractional_vertex_arboricity};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g = named_graph("cube")?;
//! let sol = fractional_vertex_arboricity(&g)?;
//! assert_eq!(sol.value, rat(8, 5));
//! let (phi, width) = arborization_from_cover(&g, &sol.cover)?;
//! assert_eq!(width, sol.value);
//! verify(&g, &phi, VerifyMode::Width(&width))?;
//! # Ok(())
//! # }
//! ```

// error variants carry exact rational diagnostics (big-integer backed) so
// reports can show the violated quantity verbatim; errors are built on cold
// paths only, so the payload size does not matter
#![allow(clippy::result_large_err)]

pub mod arborization;
pub mod combine;
pub mod corpus;
pub mod discharging;
pub mod extend;
pub mod forest;
pub mod gadget;
pub mod graph;
pub mod interval;
pub mod lp;
pub mod rational;
pub mod report;
pub mod solvers;

pub use arborization::{Arborization, VerifyMode, Violation};
pub use graph::Graph;
pub use interval::IntervalSet;
pub use rational::Rational;
