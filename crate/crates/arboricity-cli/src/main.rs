//! Command-line harness for the exact arboricity toolkit.
//!
//! Every subcommand prints one deterministic JSON report to stdout on
//! success. Rationals are rendered as "p/q" strings, keys are sorted, and
//! repeated runs on the same input produce byte-identical output.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use arboricity::arborization::verify;
use arboricity::corpus::{graph_levels, random_sparse_graph, seeded_rng};
use arboricity::discharging::{check_unavoidability, detect_configurations, discharge, UnavoidabilityOutcome};
use arboricity::extend::{extend_path, extend_star, ExtendError, ExtensionOutcome};
use arboricity::forest::max_weight_induced_forest;
use arboricity::gadget::{elaborate_witness, gadget_graph, ConfigKind, ConfigWitness};
use arboricity::graph::{from_adjacency_text, from_graph6, named_graph, to_graph6};
use arboricity::rational::{parse_rational, rat};
use arboricity::report::{
    arborization_value, cover_value, extension_value, graph_value, ledger_value,
    unavoidability_value, parse_arborization, rational_value, witness_value,
};
use arboricity::solvers::{
    acyclic_coloring, arborization_from_acyclic5, arborization_from_cover,
    fractional_chromatic_number, fractional_vertex_arboricity, is_acyclic_coloring,
    vertex_arboricity,
};
use arboricity::{Arborization, Graph, Rational, VerifyMode};

/// Exact solvers stop accepting graphs above this vertex count.
const SOLVE_LIMIT: usize = 40;
/// Exhaustive corpus enumeration stops at this vertex count.
const CORPUS_LIMIT: usize = 9;

const EXIT_HELP: &str = "Exit codes:\n  \
    0  success, every checked property holds\n  \
    1  a checked property fails (invalid assignment, violated bound, counterexample)\n  \
    2  usage or input parsing problem\n  \
    3  guard rejection (input outside a procedure's supported range)";

#[derive(Parser)]
#[command(
    name = "arboricity",
    version,
    about = "Exact fractional and integer arboricity toolkit",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// graph6 string, e.g. "C~" for the complete graph on four vertices
    #[arg(long, value_name = "G6")]
    graph6: Option<String>,

    /// file holding one graph6 line, or an adjacency list
    /// (vertex count on the first line, then one "u v" edge per line)
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,

    /// built-in graph: k4, cube, petersen, dodecahedron, star-host,
    /// path-host, cycle:N, path:N, complete:N
    #[arg(long, value_name = "NAME")]
    named: Option<String>,
}

#[derive(Args)]
struct ExtendArgs {
    /// slack below width 2, as an exact rational
    #[arg(long, value_name = "P/Q", default_value = "1/324")]
    epsilon: String,

    /// JSON assignment covering the graph minus the re-attached vertices;
    /// derived from the fractional cover of the remainder when omitted
    #[arg(long, value_name = "PATH")]
    assignment: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fractional vertex arboricity with a certified optimal forest cover
    Fva(GraphArgs),

    /// Fractional chromatic number with a certified optimal cover
    Chif(GraphArgs),

    /// Integer vertex arboricity and a witnessing forest partition
    Va(GraphArgs),

    /// Largest induced forest
    Mif(GraphArgs),

    /// Acyclic coloring; with five classes also emits the derived
    /// interval assignment over [0, 5/2)
    Acyclic {
        #[command(flatten)]
        graph: GraphArgs,

        /// number of color classes
        #[arg(long, default_value_t = 5)]
        classes: usize,
    },

    /// Charge redistribution ledger and minimum-charge configuration check
    Discharge(GraphArgs),

    /// Check an interval assignment file against a graph
    Verify {
        #[command(flatten)]
        graph: GraphArgs,

        /// JSON file mapping vertex ids to interval lists
        #[arg(long, value_name = "PATH")]
        assignment: PathBuf,

        /// also require every level to stay below this width
        #[arg(long, value_name = "P/Q")]
        width: Option<String>,

        /// allow the assignment to cover only part of the vertex set
        #[arg(long)]
        partial: bool,
    },

    /// Re-attach the degree-2 arms around a low-effective-degree center
    ExtendA {
        #[command(flatten)]
        graph: GraphArgs,

        #[command(flatten)]
        ext: ExtendArgs,
    },

    /// Re-attach a degree-3 center between two light neighbors
    ExtendB {
        #[command(flatten)]
        graph: GraphArgs,

        #[command(flatten)]
        ext: ExtendArgs,
    },

    /// Count small graphs up to isomorphism
    Corpus {
        /// largest vertex count to enumerate
        #[arg(long, default_value_t = 7)]
        limit: usize,

        /// keep only graphs with at most this many edges
        #[arg(long, value_name = "M")]
        max_edges: Option<usize>,

        /// also emit deterministic random sparse samples at the limit size
        #[arg(long, value_name = "SEED")]
        seed: Option<u64>,
    },
}

enum Failure {
    Violation(String),
    Parse(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Violation(m) | Failure::Parse(m) | Failure::Guard(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            // a closed pipe downstream is not an error worth reporting
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Fva(g) => fractional_report(&solver_graph(&g)?, true),
        Command::Chif(g) => fractional_report(&solver_graph(&g)?, false),
        Command::Va(g) => va_report(&solver_graph(&g)?),
        Command::Mif(g) => mif_report(&solver_graph(&g)?),
        Command::Acyclic { graph, classes } => acyclic_report(&solver_graph(&graph)?, classes),
        Command::Discharge(g) => discharge_report(&load_graph(&g)?),
        Command::Verify { graph, assignment, width, partial } => {
            verify_report(&load_graph(&graph)?, &assignment, width.as_deref(), partial)
        }
        Command::ExtendA { graph, ext } => {
            extend_report(&load_graph(&graph)?, ConfigKind::EffectiveDegreeTwo, &ext)
        }
        Command::ExtendB { graph, ext } => {
            extend_report(&load_graph(&graph)?, ConfigKind::DegreeThreeTwoLight, &ext)
        }
        Command::Corpus { limit, max_edges, seed } => corpus_report(limit, max_edges, seed),
    }
}

fn load_graph(args: &GraphArgs) -> Result<Graph, Failure> {
    if let Some(s) = &args.graph6 {
        return from_graph6(s).map_err(|e| Failure::Parse(e.to_string()));
    }
    if let Some(path) = &args.file {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))?;
        let trimmed = text.trim();
        if trimmed.lines().count() == 1 && !trimmed.contains(char::is_whitespace) {
            return from_graph6(trimmed).map_err(|e| Failure::Parse(e.to_string()));
        }
        return from_adjacency_text(&text).map_err(|e| Failure::Parse(e.to_string()));
    }
    let name = args.named.as_deref().expect("clap requires one input source");
    match name.trim().to_ascii_lowercase().as_str() {
        "star-host" => Ok(gadget_graph(ConfigKind::EffectiveDegreeTwo).0),
        "path-host" => Ok(gadget_graph(ConfigKind::DegreeThreeTwoLight).0),
        _ => named_graph(name).map_err(|e| Failure::Parse(e.to_string())),
    }
}

/// Loads the graph and applies the exact-solver size guard.
fn solver_graph(args: &GraphArgs) -> Result<Graph, Failure> {
    let g = load_graph(args)?;
    if g.n() == 0 {
        return Err(Failure::Guard("the empty graph has nothing to solve".into()));
    }
    if g.n() > SOLVE_LIMIT {
        return Err(Failure::Guard(format!(
            "graph on {} vertices exceeds the exact-solver limit of {SOLVE_LIMIT}",
            g.n()
        )));
    }
    Ok(g)
}

fn fractional_report(g: &Graph, forests: bool) -> Result<Value, Failure> {
    let fc = if forests { fractional_vertex_arboricity(g) } else { fractional_chromatic_number(g) }
        .map_err(|e| Failure::Violation(e.to_string()))?;
    let mut report = json!({
        "graph": graph_value(g),
        "value": rational_value(&fc.value),
        "cover": cover_value(&fc),
    });
    if forests {
        let (phi, width) =
            arborization_from_cover(g, &fc.cover).map_err(|e| Failure::Violation(e.to_string()))?;
        verify(g, &phi, VerifyMode::Width(&width)).map_err(|e| Failure::Violation(e.to_string()))?;
        report["assignment"] = arborization_value(&phi);
        report["width"] = rational_value(&width);
    }
    Ok(report)
}

fn va_report(g: &Graph) -> Result<Value, Failure> {
    let (k, coloring) = vertex_arboricity(g);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &c) in coloring.iter().enumerate() {
        classes[c].push(v);
    }
    for class in &classes {
        let set: BTreeSet<usize> = class.iter().copied().collect();
        if !g.is_induced_forest(&set) {
            return Err(Failure::Violation(format!("class {class:?} does not induce a forest")));
        }
    }
    Ok(json!({
        "graph": graph_value(g),
        "value": k,
        "classes": classes,
    }))
}

fn mif_report(g: &Graph) -> Result<Value, Failure> {
    let weights = vec![rat(1, 1); g.n()];
    let r = max_weight_induced_forest(g, &weights).map_err(|e| match e {
        arboricity::forest::OracleError::TooLarge { .. } => Failure::Guard(e.to_string()),
        _ => Failure::Parse(e.to_string()),
    })?;
    if !g.is_induced_forest(&r.set) {
        return Err(Failure::Violation(format!("witness {:?} does not induce a forest", r.set)));
    }
    Ok(json!({
        "graph": graph_value(g),
        "size": r.set.len(),
        "vertices": r.set.iter().copied().collect::<Vec<_>>(),
    }))
}

fn acyclic_report(g: &Graph, classes: usize) -> Result<Value, Failure> {
    if classes == 0 {
        return Err(Failure::Guard("need at least one color class".into()));
    }
    let Some(coloring) = acyclic_coloring(g, classes) else {
        return Err(Failure::Violation(format!("no acyclic coloring with {classes} classes")));
    };
    if !is_acyclic_coloring(g, &coloring) {
        return Err(Failure::Violation("produced coloring fails the acyclicity check".into()));
    }
    let mut report = json!({
        "graph": graph_value(g),
        "classes": classes,
        "coloring": coloring,
    });
    if classes == 5 {
        let phi = arborization_from_acyclic5(g, &coloring)
            .map_err(|e| Failure::Violation(e.to_string()))?;
        verify(g, &phi, VerifyMode::Plain).map_err(|e| Failure::Violation(e.to_string()))?;
        report["assignment"] = arborization_value(&phi);
    }
    Ok(report)
}

fn discharge_report(g: &Graph) -> Result<Value, Failure> {
    let ledger = discharge(g);
    let outcome = check_unavoidability(g);
    if let UnavoidabilityOutcome::Counterexample { vertex, charge } = &outcome {
        return Err(Failure::Violation(format!(
            "vertex {vertex} has charge {charge} but no reducible configuration"
        )));
    }
    let configs: Vec<Value> = detect_configurations(g).iter().map(witness_value).collect();
    Ok(json!({
        "graph": graph_value(g),
        "ledger": ledger_value(&ledger),
        "outcome": unavoidability_value(&outcome),
        "configurations": configs,
    }))
}

fn read_assignment(path: &Path) -> Result<Arborization, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    // accept either a bare vertex-to-intervals map or a whole solver report
    let body = match &v {
        Value::Object(m) if m.contains_key("assignment") => &m["assignment"],
        _ => &v,
    };
    parse_arborization(body).map_err(|e| Failure::Parse(e.to_string()))
}

fn verify_report(
    g: &Graph,
    assignment: &Path,
    width: Option<&str>,
    partial: bool,
) -> Result<Value, Failure> {
    let phi = read_assignment(assignment)?;
    let missing: Vec<usize> = (0..g.n()).filter(|&v| !phi.contains(v)).collect();
    if !partial && !missing.is_empty() {
        return Err(Failure::Violation(format!(
            "assignment misses vertices {missing:?}; pass --partial to verify a subdomain"
        )));
    }
    let bound: Option<Rational> = width
        .map(parse_rational)
        .transpose()
        .map_err(|e| Failure::Parse(e.to_string()))?;
    let checked = match &bound {
        Some(b) => verify(g, &phi, VerifyMode::Width(b)),
        None => verify(g, &phi, VerifyMode::Plain),
    };
    checked.map_err(|e| Failure::Violation(e.to_string()))?;
    let mut report = json!({
        "ok": true,
        "graph": graph_value(g),
        "vertices": phi.len(),
        "complete": missing.is_empty(),
    });
    if let Some(b) = &bound {
        report["width"] = rational_value(b);
    }
    Ok(report)
}

/// Arms for the star procedure, just the center for the path procedure.
fn removed_for(kind: ConfigKind, w: &ConfigWitness) -> BTreeSet<usize> {
    match kind {
        ConfigKind::EffectiveDegreeTwo => {
            (1..=7).filter_map(|i| w.role(&format!("u{i}"))).collect()
        }
        _ => BTreeSet::from([w.center()]),
    }
}

/// Solves the remainder exactly and spreads its cover into intervals.
fn derived_assignment(g: &Graph, removed: &BTreeSet<usize>) -> Result<Arborization, Failure> {
    let (sub, ids) = g.delete_vertices(removed);
    let fc =
        fractional_vertex_arboricity(&sub).map_err(|e| Failure::Violation(e.to_string()))?;
    let (phi, _) =
        arborization_from_cover(&sub, &fc.cover).map_err(|e| Failure::Violation(e.to_string()))?;
    Ok(phi.iter().map(|(v, s)| (ids[v], s.clone())).collect())
}

fn extend_failure(e: ExtendError) -> Failure {
    match e {
        ExtendError::BoundViolated { .. }
        | ExtendError::Verification(_)
        | ExtendError::NotUnitMeasure { .. }
        | ExtendError::InsufficientOverlap { .. }
        | ExtendError::DomainMismatch { .. }
        | ExtendError::Offshoot(_)
        | ExtendError::Combine(_) => Failure::Violation(e.to_string()),
        _ => Failure::Guard(e.to_string()),
    }
}

fn extend_report(g: &Graph, kind: ConfigKind, args: &ExtendArgs) -> Result<Value, Failure> {
    if g.n() > SOLVE_LIMIT && args.assignment.is_none() {
        return Err(Failure::Guard(format!(
            "graph on {} vertices exceeds the exact-solver limit of {SOLVE_LIMIT}; \
             pass --assignment to skip the solve",
            g.n()
        )));
    }
    let eps = parse_rational(&args.epsilon).map_err(|e| Failure::Parse(e.to_string()))?;
    let witnesses: Vec<ConfigWitness> = detect_configurations(g)
        .into_iter()
        .filter(|w| w.kind == kind)
        .map(|w| elaborate_witness(g, &w))
        .collect();
    if witnesses.is_empty() {
        return Err(Failure::Guard(format!("no {} configuration in the graph", kind.name())));
    }
    let mut last: Option<ExtendError> = None;
    for w in &witnesses {
        let removed = removed_for(kind, w);
        let phi = match &args.assignment {
            Some(path) => read_assignment(path)?,
            None => derived_assignment(g, &removed)?,
        };
        let attempt: Result<ExtensionOutcome, ExtendError> = match kind {
            ConfigKind::EffectiveDegreeTwo => extend_star(g, w, &phi, &eps),
            _ => extend_path(g, w, &phi, &eps),
        };
        match attempt {
            Ok(out) => {
                return Ok(json!({
                    "graph": graph_value(g),
                    "witness": witness_value(w),
                    "epsilon": rational_value(&eps),
                    "removed": removed.iter().copied().collect::<Vec<_>>(),
                    "extension": extension_value(&out),
                }));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(extend_failure(last.expect("at least one witness was tried")))
}

fn corpus_report(limit: usize, max_edges: Option<usize>, seed: Option<u64>) -> Result<Value, Failure> {
    if !(1..=CORPUS_LIMIT).contains(&limit) {
        return Err(Failure::Guard(format!("corpus limit {limit} outside 1..={CORPUS_LIMIT}")));
    }
    let levels = graph_levels(limit, max_edges);
    let rows: Vec<Value> = (1..=limit)
        .map(|n| {
            let gs = &levels[n];
            let connected = gs.iter().filter(|g| g.is_connected()).count();
            json!({ "n": n, "graphs": gs.len(), "connected": connected })
        })
        .collect();
    let mut report = json!({
        "limit": limit,
        "max_edges": max_edges,
        "levels": rows,
    });
    if let Some(seed) = seed {
        let mut rng = seeded_rng(seed);
        let sample: Vec<String> =
            (0..5).map(|_| to_graph6(&random_sparse_graph(&mut rng, limit))).collect();
        report["seed"] = json!(seed);
        report["sample"] = json!(sample);
    }
    Ok(report)
}
