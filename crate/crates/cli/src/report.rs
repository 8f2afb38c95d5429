//! Command implementations. Every command builds both a plain-text report
//! and a JSON value; `Options::json` picks which one is printed. All
//! indices in reports are 1-based (`e1`, `v1`, `z1`), matching the input
//! grammar.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use signed_toric::balanced::{self, is_difference_graph};
use signed_toric::graph::{BidirectedGraph, GraphCase};
use signed_toric::lp::Rat;
use signed_toric::matrix;
use signed_toric::matroid::VectorConfig;
use signed_toric::poset::{
    gorenstein_for_graph, weights_for_graph, GorensteinWitness, SignedPoset, SignedWeights,
};
use signed_toric::toric::{self, ClassGroup, ConicPolytope, Mode};
use signed_toric::Error;

use crate::error::{CliError, EXIT_INVARIANT};
use crate::input::InputDocument;

const SCHEMA: &str = "signed-toric/1";

pub struct Options {
    pub json: bool,
    pub limit: usize,
    pub seed: u64,
}

pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn finish(opts: &Options, text: String, value: Value, code: i32) -> Outcome {
    let stdout = if opts.json {
        let mut s = serde_json::to_string_pretty(&value).expect("reports are serializable");
        s.push('\n');
        s
    } else {
        text
    };
    Outcome { stdout, code }
}

// ---------------------------------------------------------------- labels --

fn edge_label(e: usize) -> String {
    format!("e{}", e + 1)
}

fn vertex_label(v: usize) -> String {
    format!("v{}", v + 1)
}

fn edge_set(edges: &[usize]) -> String {
    let mut sorted: Vec<usize> = edges.to_vec();
    sorted.sort_unstable();
    let labels: Vec<String> = sorted.iter().map(|&e| edge_label(e)).collect();
    format!("{{{}}}", labels.join(","))
}

fn vertex_set(vertices: &[usize]) -> String {
    let mut sorted: Vec<usize> = vertices.to_vec();
    sorted.sort_unstable();
    let labels: Vec<String> = sorted.iter().map(|&v| vertex_label(v)).collect();
    format!("{{{}}}", labels.join(","))
}

fn tuple(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Linear form in the weight coordinates, e.g. "z1 - 2z3".
fn form(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let var = format!("z{}", i + 1);
        if out.is_empty() {
            if c.is_one() {
                out = var;
            } else if *c == -BigInt::one() {
                out = format!("-{var}");
            } else {
                out = format!("{c}{var}");
            }
        } else {
            let mag = c.abs();
            out.push_str(if c.is_negative() { " - " } else { " + " });
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&var);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn case_name(case: GraphCase) -> &'static str {
    match case {
        GraphCase::Balanced => "balanced",
        GraphCase::WithHalfedge => "with halfedge",
        GraphCase::Unbalanced => "unbalanced",
    }
}

fn jint(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn jints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(jint).collect())
}

fn jedges(edges: &[usize]) -> Value {
    let mut sorted: Vec<usize> = edges.to_vec();
    sorted.sort_unstable();
    Value::Array(sorted.into_iter().map(|e| Value::String(edge_label(e))).collect())
}

// --------------------------------------------------------------- shared --

fn hasse(doc: &InputDocument) -> Result<BidirectedGraph, CliError> {
    doc.poset.hasse().map_err(CliError::from)
}

fn doc_weights(doc: &InputDocument, graph: &BidirectedGraph) -> Result<SignedWeights, Error> {
    weights_for_graph(
        graph,
        doc.forest.as_deref(),
        doc.epsilons.as_deref(),
        doc.walks.as_deref(),
    )
}

fn forbid_choices_when_split(doc: &InputDocument) -> Result<(), CliError> {
    if doc.forest.is_some() || doc.epsilons.is_some() || doc.walks.is_some() {
        return Err(CliError::validation(
            "forest, epsilon, and walk choices need a connected diagram",
        ));
    }
    Ok(())
}

/// Class group with both internal routes; a disagreement is an invariant
/// failure, not an input problem.
fn class_group_checked(poset: &SignedPoset) -> Result<ClassGroup, CliError> {
    match poset.class_group() {
        Ok(group) => Ok(group),
        Err(Error::Invalid(msg)) if msg.starts_with("class group mismatch") => {
            Err(CliError { code: EXIT_INVARIANT, message: msg })
        }
        Err(e) => Err(e.into()),
    }
}

/// Connected pieces of the diagram with their maps back to the original
/// labels, plus per-piece weights with the default choices.
struct Piece {
    weights: SignedWeights,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

fn split_pieces(doc: &InputDocument) -> Result<Vec<Piece>, CliError> {
    let graph = hasse(doc)?;
    let mut out = Vec::new();
    for comp in graph.components() {
        let (sub, edge_map) = graph.subgraph(&comp);
        let weights = weights_for_graph(&sub, None, None, None).map_err(CliError::from)?;
        out.push(Piece { weights, vertex_map: comp, edge_map });
    }
    Ok(out)
}

// ------------------------------------------------------------ classgroup --

pub fn classgroup(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let config = doc.poset.extremal_generators().map_err(CliError::from)?;
    let group = class_group_checked(&doc.poset)?;
    let snf = matrix::smith_normal_form(&config.matrix());
    let factors: Vec<BigInt> =
        snf.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect();
    let rank = factors.len();

    let mut text = format!("{}\n", group.describe());
    if factors.is_empty() {
        text.push_str("invariant factors: none\n");
    } else {
        let list: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("invariant factors: {}\n", list.join(", ")));
    }
    text.push_str(&format!(
        "generators: {}, rank: {}, free rank: {}\n",
        config.len(),
        rank,
        group.free_rank
    ));

    let value = json!({
        "schema": SCHEMA,
        "command": "classgroup",
        "class_group": group.describe(),
        "free_rank": group.free_rank,
        "torsion": group.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "invariant_factors": factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "generators": config.len(),
        "rank": rank,
    });
    Ok(finish(opts, text, value, 0))
}

// --------------------------------------------------------------- weights --

/// Text block for one connected piece. `edge_map`/`vertex_map` translate
/// piece-local indices back to the input labels; `indent` nests component
/// blocks.
fn weight_block_text(
    w: &SignedWeights,
    edge_map: &[usize],
    indent: &str,
) -> String {
    let unbalanced = w.system.case == GraphCase::Unbalanced;
    let mut text = String::new();
    text.push_str(&format!("{indent}class group: {}\n", w.class_group().describe()));
    text.push_str(&format!("{indent}case: {}\n", case_name(w.system.case)));
    let forest: Vec<usize> = w.system.forest.iter().map(|&e| edge_map[e]).collect();
    text.push_str(&format!("{indent}forest: {}\n", edge_set(&forest)));
    let basis: Vec<String> =
        w.system.epsilons.iter().map(|&e| edge_label(edge_map[e])).collect();
    text.push_str(&format!("{indent}basis: ({})\n", basis.join(", ")));
    if unbalanced {
        let circle: Vec<usize> =
            w.system.negative_circle.iter().map(|&e| edge_map[e]).collect();
        text.push_str(&format!("{indent}negative circle: {}\n", edge_set(&circle)));
    }
    text.push_str(&format!("{indent}weights:\n"));
    let mut rows: Vec<(usize, usize)> =
        (0..w.config.len()).map(|e| (edge_map[e], e)).collect();
    rows.sort_unstable();
    for (label, e) in rows {
        let mut line = format!("{indent}  {}: {}", edge_label(label), tuple(&w.free(e)));
        if unbalanced {
            line.push_str(&format!("; bit {}", w.bit(e)));
        }
        line.push('\n');
        text.push_str(&line);
    }
    text
}

fn weight_block_json(w: &SignedWeights, edge_map: &[usize]) -> Value {
    let forest: Vec<usize> = w.system.forest.iter().map(|&e| edge_map[e]).collect();
    let basis: Vec<String> =
        w.system.epsilons.iter().map(|&e| edge_label(edge_map[e])).collect();
    let mut rows: Vec<(usize, usize)> =
        (0..w.config.len()).map(|e| (edge_map[e], e)).collect();
    rows.sort_unstable();
    let weights: Vec<Value> = rows
        .into_iter()
        .map(|(label, e)| {
            json!({
                "edge": edge_label(label),
                "free": jints(&w.free(e)),
                "bit": w.bit(e),
            })
        })
        .collect();
    let mut value = json!({
        "class_group": w.class_group().describe(),
        "case": case_name(w.system.case),
        "forest": jedges(&forest),
        "basis": basis,
        "weights": weights,
    });
    if w.system.case == GraphCase::Unbalanced {
        let circle: Vec<usize> =
            w.system.negative_circle.iter().map(|&e| edge_map[e]).collect();
        value["negative_circle"] = jedges(&circle);
    }
    value
}

pub fn weights(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let graph = hasse(doc)?;
    if graph.is_connected() {
        let w = doc_weights(doc, &graph).map_err(CliError::from)?;
        let identity: Vec<usize> = (0..graph.edge_count()).collect();
        let text = weight_block_text(&w, &identity, "");
        let mut value = weight_block_json(&w, &identity);
        value["schema"] = json!(SCHEMA);
        value["command"] = json!("weights");
        return Ok(finish(opts, text, value, 0));
    }
    forbid_choices_when_split(doc)?;
    let pieces = split_pieces(doc)?;
    let total = class_group_checked(&doc.poset)?;
    let mut text = format!("{} components\n", pieces.len());
    let mut blocks = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let edges: Vec<usize> = piece.edge_map.clone();
        text.push_str(&format!(
            "component {}: vertices {}, edges {}\n",
            i + 1,
            vertex_set(&piece.vertex_map),
            edge_set(&edges)
        ));
        text.push_str(&weight_block_text(&piece.weights, &piece.edge_map, "  "));
        let mut block = weight_block_json(&piece.weights, &piece.edge_map);
        block["vertices"] = Value::Array(
            piece.vertex_map.iter().map(|&v| Value::String(vertex_label(v))).collect(),
        );
        block["edges"] = jedges(&edges);
        blocks.push(block);
    }
    text.push_str(&format!("total class group: {}\n", total.describe()));
    let value = json!({
        "schema": SCHEMA,
        "command": "weights",
        "class_group": total.describe(),
        "components": blocks,
    });
    Ok(finish(opts, text, value, 0))
}

// ----------------------------------------------------------------- conic --

/// Reduced slabs in a deterministic order.
fn sorted_slabs(region: &ConicPolytope) -> Vec<toric::Facet> {
    let mut facets = region.reduced().facets;
    facets.sort_by(|a, b| {
        (&a.functional, &a.lower, &a.upper).cmp(&(&b.functional, &b.lower, &b.upper))
    });
    facets
}

fn region_text(region: &ConicPolytope, indent: &str) -> String {
    let slabs = sorted_slabs(region);
    let mut text = format!("{indent}conic region in Z^{}:\n", region.ambient_dim);
    if slabs.is_empty() {
        text.push_str(&format!("{indent}  (no constraints)\n"));
    }
    for f in &slabs {
        text.push_str(&format!(
            "{indent}  {} < {} < {}\n",
            f.lower,
            form(&f.functional),
            f.upper
        ));
    }
    text
}

fn region_json(region: &ConicPolytope, edge_map: &[usize]) -> Value {
    let slabs: Vec<Value> = sorted_slabs(region)
        .iter()
        .map(|f| {
            let circuit: Vec<usize> = f.circuit.iter().map(|&e| edge_map[e]).collect();
            json!({
                "functional": jints(&f.functional),
                "lower": jint(&f.lower),
                "upper": jint(&f.upper),
                "circuit": jedges(&circuit),
            })
        })
        .collect();
    json!({ "ambient_dim": region.ambient_dim, "slabs": slabs })
}

fn points_json(points: &[Vec<BigInt>]) -> Value {
    Value::Array(points.iter().map(|p| jints(p)).collect())
}

pub fn conic(
    doc: &InputDocument,
    opts: &Options,
    want_points: bool,
    want_count: bool,
) -> Result<Outcome, CliError> {
    let graph = hasse(doc)?;
    if graph.is_connected() {
        let w = doc_weights(doc, &graph).map_err(CliError::from)?;
        let region = w.conic_region(opts.limit).map_err(CliError::from)?;
        let identity: Vec<usize> = (0..graph.edge_count()).collect();
        let mut text = region_text(&region, "");
        let mut value = region_json(&region, &identity);
        value["schema"] = json!(SCHEMA);
        value["command"] = json!("conic");
        if want_points || want_count {
            let points = toric::lattice_points(&region, Mode::Open, 1).map_err(CliError::from)?;
            if want_points {
                text.push_str(&format!("interior points ({}):\n", points.len()));
                for p in &points {
                    text.push_str(&format!("  {}\n", tuple(p)));
                }
                value["points"] = points_json(&points);
            }
            if want_count {
                let torsion = w.class_group().torsion_order();
                let classes = BigInt::from(points.len()) * &torsion;
                text.push_str(&format!(
                    "classes: {} = {} interior points x torsion order {}\n",
                    classes,
                    points.len(),
                    torsion
                ));
                value["count"] = jint(&classes);
            }
        }
        return Ok(finish(opts, text, value, 0));
    }
    forbid_choices_when_split(doc)?;
    let pieces = split_pieces(doc)?;
    let mut text = format!("{} components\n", pieces.len());
    let mut blocks = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let region = piece.weights.conic_region(opts.limit).map_err(CliError::from)?;
        text.push_str(&format!(
            "component {}: vertices {}, edges {}\n",
            i + 1,
            vertex_set(&piece.vertex_map),
            edge_set(&piece.edge_map)
        ));
        text.push_str(&region_text(&region, "  "));
        let mut block = region_json(&region, &piece.edge_map);
        block["vertices"] = Value::Array(
            piece.vertex_map.iter().map(|&v| Value::String(vertex_label(v))).collect(),
        );
        if want_points || want_count {
            let points = toric::lattice_points(&region, Mode::Open, 1).map_err(CliError::from)?;
            if want_points {
                text.push_str(&format!("  interior points ({}):\n", points.len()));
                for p in &points {
                    text.push_str(&format!("    {}\n", tuple(p)));
                }
                block["points"] = points_json(&points);
            }
            if want_count {
                let torsion = piece.weights.class_group().torsion_order();
                let classes = BigInt::from(points.len()) * &torsion;
                text.push_str(&format!(
                    "  classes: {} = {} interior points x torsion order {}\n",
                    classes,
                    points.len(),
                    torsion
                ));
                block["count"] = jint(&classes);
            }
        }
        blocks.push(block);
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "conic",
        "components": blocks,
    });
    Ok(finish(opts, text, value, 0))
}

// ----------------------------------------------------------------- count --

struct ThreeCounts {
    enumeration: BigInt,
    formula: BigInt,
    tutte: Rat,
}

impl ThreeCounts {
    fn compute(config: &VectorConfig, limit: usize) -> Result<ThreeCounts, Error> {
        let ws = toric::weight_system(config, None)?;
        Ok(ThreeCounts {
            enumeration: toric::conic_count_enumeration(config, &ws, limit)?,
            formula: toric::conic_count_formula(config, limit)?,
            tutte: toric::multiplicity_tutte(config, &Rat::one(), &Rat::zero(), limit)?,
        })
    }

    fn agree(&self) -> bool {
        self.enumeration == self.formula
            && Rat::from_integer(self.enumeration.clone()) == self.tutte
    }
}

pub fn count(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let config = doc.poset.extremal_generators().map_err(CliError::from)?;
    let counts = ThreeCounts::compute(&config, opts.limit).map_err(CliError::from)?;
    let agree = counts.agree();
    let text = format!(
        "enumeration={} formula={} tutte={} {}\n",
        counts.enumeration,
        counts.formula,
        counts.tutte,
        if agree { "OK" } else { "MISMATCH" }
    );
    let value = json!({
        "schema": SCHEMA,
        "command": "count",
        "enumeration": jint(&counts.enumeration),
        "formula": jint(&counts.formula),
        "tutte": counts.tutte.to_string(),
        "agree": agree,
    });
    Ok(finish(opts, text, value, if agree { 0 } else { EXIT_INVARIANT }))
}

// ------------------------------------------------------------ gorenstein --

fn witness_text(witness: &GorensteinWitness) -> String {
    match witness {
        GorensteinWitness::OddNegativeCircle(edges) => {
            format!("odd negative circle {}", edge_set(edges))
        }
        GorensteinWitness::ImbalancedCircuit(edges) => {
            format!(
                "circuit with unequal forward and backward steps {}",
                edge_set(edges)
            )
        }
    }
}

fn witness_json(witness: &GorensteinWitness) -> Value {
    match witness {
        GorensteinWitness::OddNegativeCircle(edges) => {
            json!({ "kind": "odd negative circle", "edges": jedges(edges) })
        }
        GorensteinWitness::ImbalancedCircuit(edges) => {
            json!({ "kind": "imbalanced circuit", "edges": jedges(edges) })
        }
    }
}

pub fn gorenstein(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    use signed_toric::poset::GorensteinVerdict::*;
    let graph = hasse(doc)?;
    let status = gorenstein_for_graph(&graph, opts.limit).map_err(CliError::from)?;
    let by_weights = doc.poset.gorenstein_from_weights().map_err(CliError::from)?;
    let agree = status.verdict == by_weights;
    let headline = match (&status.verdict, &status.witness) {
        (Gorenstein, _) => "Gorenstein".to_string(),
        (QGorensteinOnly, Some(w)) => {
            format!("Q-Gorenstein (not Gorenstein): {}", witness_text(w))
        }
        (Neither, Some(w)) => format!("not Q-Gorenstein: {}", witness_text(w)),
        (verdict, None) => verdict.to_string(),
    };
    let mut text = format!("{headline}\n");
    if !agree {
        text.push_str(&format!(
            "INVARIANT FAILURE: the canonical-class route says {by_weights}\n"
        ));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "gorenstein",
        "verdict": status.verdict.to_string(),
        "witness": status.witness.as_ref().map(witness_json).unwrap_or(Value::Null),
        "routes_agree": agree,
    });
    Ok(finish(opts, text, value, if agree { 0 } else { EXIT_INVARIANT }))
}

// ---------------------------------------------------------- orientations --

fn parse_source(arg: &str, vertex_count: usize) -> Result<usize, CliError> {
    let digits = arg.strip_prefix('v').unwrap_or(arg);
    let v = digits.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| {
        CliError::validation(format!("invalid source `{arg}`; expected a vertex like v2"))
    })?;
    if v > vertex_count {
        return Err(CliError::validation(format!(
            "no vertex v{v} (the diagram has {vertex_count} vertices)"
        )));
    }
    Ok(v - 1)
}

fn orientation_label(orientation: &[bool]) -> String {
    let parts: Vec<String> = orientation
        .iter()
        .enumerate()
        .map(|(e, &keep)| if keep { edge_label(e) } else { format!("-{}", edge_label(e)) })
        .collect();
    parts.join(" ")
}

pub fn orientations(
    doc: &InputDocument,
    opts: &Options,
    source: Option<&str>,
) -> Result<Outcome, CliError> {
    let graph = hasse(doc)?;
    if !graph.is_connected() {
        return Err(CliError::validation("orientations need a connected diagram"));
    }
    if !is_difference_graph(&graph) {
        return Err(CliError::validation(
            "orientations need difference roots only; run `reduce` first",
        ));
    }
    let source = match source {
        Some(arg) => parse_source(arg, graph.vertex_count())?,
        None => 0,
    };
    let w = doc_weights(doc, &graph).map_err(CliError::from)?;
    let orients =
        balanced::acyclic_orientations_unique_source(&graph, source, opts.limit)
            .map_err(CliError::from)?;
    let classes: Vec<Vec<BigInt>> = orients
        .iter()
        .map(|o| balanced::orientation_class(&w, o))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let region = w.conic_region(opts.limit).map_err(CliError::from)?;
    let points = toric::lattice_points(&region, Mode::Open, 1).map_err(CliError::from)?;
    let class_set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
    let point_set: BTreeSet<Vec<BigInt>> = points.iter().cloned().collect();
    let bijective = class_set.len() == classes.len() && class_set == point_set;

    let mut text = format!(
        "{} acyclic orientations with unique source {}:\n",
        orients.len(),
        vertex_label(source)
    );
    for (o, class) in orients.iter().zip(&classes) {
        text.push_str(&format!("  {}  ->  {}\n", orientation_label(o), tuple(class)));
    }
    text.push_str(&format!(
        "bijection with the {} interior points: {}\n",
        points.len(),
        if bijective { "OK" } else { "MISMATCH" }
    ));

    let rows: Vec<Value> = orients
        .iter()
        .zip(&classes)
        .map(|(o, class)| {
            let edges: Vec<String> = o
                .iter()
                .enumerate()
                .map(|(e, &keep)| {
                    if keep {
                        edge_label(e)
                    } else {
                        format!("-{}", edge_label(e))
                    }
                })
                .collect();
            json!({ "edges": edges, "class": jints(class) })
        })
        .collect();
    let value = json!({
        "schema": SCHEMA,
        "command": "orientations",
        "source": vertex_label(source),
        "orientations": rows,
        "interior_points": points_json(&points),
        "bijection": bijective,
    });
    Ok(finish(opts, text, value, if bijective { 0 } else { EXIT_INVARIANT }))
}

// --------------------------------------------------------------- ehrhart --

struct EhrhartReport {
    coefficients: Vec<Rat>,
    /// (dilation, polynomial value, closed count) for t = 1..3.
    dilations: Vec<(u64, Rat, BigInt)>,
    /// Signed value of the polynomial at -1 and the interior count.
    reciprocity: (Rat, BigInt),
}

impl EhrhartReport {
    fn compute(config: &VectorConfig, limit: usize) -> Result<EhrhartReport, Error> {
        let ws = toric::weight_system(config, None)?;
        let coefficients = toric::ehrhart_gale_zonotope(config, limit)?;
        let region = toric::conic_polytope(config, &ws, limit)?;
        let mut dilations = Vec::new();
        for t in 1..=3u64 {
            let closed = toric::lattice_points(&region, Mode::Closed, t)?.len();
            let value = toric::eval_poly(&coefficients, &BigInt::from(t));
            dilations.push((t, value, BigInt::from(closed)));
        }
        let open = toric::lattice_points(&region, Mode::Open, 1)?.len();
        let degree = coefficients.len() - 1;
        let mut signed = toric::eval_poly(&coefficients, &BigInt::from(-1));
        if degree % 2 == 1 {
            signed = -signed;
        }
        Ok(EhrhartReport {
            coefficients,
            dilations,
            reciprocity: (signed, BigInt::from(open)),
        })
    }

    fn all_ok(&self) -> bool {
        self.dilations.iter().all(|(_, value, count)| *value == Rat::from_integer(count.clone()))
            && self.reciprocity.0 == Rat::from_integer(self.reciprocity.1.clone())
    }
}

pub fn ehrhart(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let config = doc.poset.extremal_generators().map_err(CliError::from)?;
    let report = EhrhartReport::compute(&config, opts.limit).map_err(CliError::from)?;

    let coeffs: Vec<String> = report.coefficients.iter().map(|c| c.to_string()).collect();
    let mut text = format!("coefficients (ascending): {}\n", coeffs.join(", "));
    let mut checks = Vec::new();
    for (t, value, count) in &report.dilations {
        let ok = *value == Rat::from_integer(count.clone());
        text.push_str(&format!(
            "t={}: polynomial={} enumerated={} {}\n",
            t,
            value,
            count,
            if ok { "ok" } else { "MISMATCH" }
        ));
        checks.push(json!({
            "dilation": t,
            "polynomial": value.to_string(),
            "enumerated": jint(count),
            "ok": ok,
        }));
    }
    let (signed, open) = &report.reciprocity;
    let rec_ok = *signed == Rat::from_integer(open.clone());
    text.push_str(&format!(
        "reciprocity: signed value at -1 is {}, interior points {}, {}\n",
        signed,
        open,
        if rec_ok { "ok" } else { "MISMATCH" }
    ));
    let all_ok = report.all_ok();

    let value = json!({
        "schema": SCHEMA,
        "command": "ehrhart",
        "coefficients": coeffs,
        "dilations": checks,
        "reciprocity": {
            "signed_value": signed.to_string(),
            "interior": jint(open),
            "ok": rec_ok,
        },
    });
    Ok(finish(opts, text, value, if all_ok { 0 } else { EXIT_INVARIANT }))
}

// ---------------------------------------------------------------- reduce --

pub fn reduce(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let red = balanced::reduce(&doc.poset).map_err(CliError::from)?;
    let before = class_group_checked(&doc.poset)?;
    let after = class_group_checked(&red.poset)?;
    let agree = before == after;

    let mut text = format!("switching set: {}\n", vertex_set(&red.switching));
    text.push_str(&format!(
        "added vertex: {}\n",
        red.new_vertex.map(vertex_label).unwrap_or_else(|| "none".into())
    ));
    text.push_str(&format!("class group: {}\n", after.describe()));
    text.push_str(&format!("reduced generators ({}):\n", red.poset.len()));
    for (e, root) in red.poset.roots().iter().enumerate() {
        text.push_str(&format!("  {}: {}\n", edge_label(e), root));
    }
    if !agree {
        text.push_str(&format!(
            "INVARIANT FAILURE: class group changed from {} to {}\n",
            before.describe(),
            after.describe()
        ));
    }

    let mut switching: Vec<usize> = red.switching.clone();
    switching.sort_unstable();
    let value = json!({
        "schema": SCHEMA,
        "command": "reduce",
        "switching": switching.iter().map(|&v| vertex_label(v)).collect::<Vec<_>>(),
        "added_vertex": red.new_vertex.map(vertex_label).map(Value::String).unwrap_or(Value::Null),
        "class_group": after.describe(),
        "generators": red.poset.roots().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    });
    Ok(finish(opts, text, value, if agree { 0 } else { EXIT_INVARIANT }))
}

// ---------------------------------------------------------------- verify --

#[derive(Clone, Copy, PartialEq, Eq)]
enum CheckStatus {
    Ok,
    Fail,
    Skipped,
}

struct Check {
    name: &'static str,
    status: CheckStatus,
    detail: String,
}

/// Record a check outcome; enumeration caps abort the whole run instead of
/// counting as a failed invariant.
fn push_check(
    checks: &mut Vec<Check>,
    name: &'static str,
    result: Result<String, Error>,
) -> Result<(), CliError> {
    match result {
        Ok(detail) => {
            checks.push(Check { name, status: CheckStatus::Ok, detail });
            Ok(())
        }
        Err(err @ Error::Limit { .. }) => Err(CliError::limit(err.to_string())),
        Err(err) => {
            checks.push(Check { name, status: CheckStatus::Fail, detail: err.to_string() });
            Ok(())
        }
    }
}

fn skip_check(checks: &mut Vec<Check>, name: &'static str, reason: &str) {
    checks.push(Check { name, status: CheckStatus::Skipped, detail: reason.to_string() });
}

fn circuits_check(
    config: &VectorConfig,
    graph: &BidirectedGraph,
    limit: usize,
) -> Result<String, Error> {
    let from_matroid = config.circuits(limit)?;
    let from_graph = graph.circuits(limit)?;
    let a: BTreeMap<Vec<usize>, Vec<BigInt>> =
        from_matroid.iter().map(|c| (c.support.clone(), c.vector.clone())).collect();
    let b: BTreeMap<Vec<usize>, Vec<BigInt>> =
        from_graph.iter().map(|c| (c.support.clone(), c.vector.clone())).collect();
    if a.len() != from_matroid.len()
        || b.len() != from_graph.len()
        || !a.keys().eq(b.keys())
    {
        return Err(Error::Invalid(
            "circuit supports differ between the matroid and graph routes".into(),
        ));
    }
    for (support, v1) in &a {
        let v2 = &b[support];
        let negated: Vec<BigInt> = v2.iter().map(|x| -x).collect();
        if *v1 != *v2 && *v1 != negated {
            return Err(Error::Invalid(format!(
                "circuit {} differs between the matroid and graph routes",
                edge_set(support)
            )));
        }
    }
    Ok(format!(
        "{} circuit{} agree between the matroid and graph routes",
        a.len(),
        if a.len() == 1 { "" } else { "s" }
    ))
}

pub fn verify(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let graph = hasse(doc)?;
    let config = doc.poset.extremal_generators().map_err(CliError::from)?;
    let limit = opts.limit;
    let mut checks: Vec<Check> = Vec::new();

    push_check(
        &mut checks,
        "class group",
        doc.poset.class_group().map(|g| g.describe()),
    )?;

    push_check(&mut checks, "circuits", circuits_check(&config, &graph, limit))?;

    let exactness = (|| -> Result<String, Error> {
        if graph.is_connected() {
            let w = doc_weights(doc, &graph)?;
            w.verify_exact_sequence()?;
            Ok("the weight map presents the class group".into())
        } else {
            let mut pieces = 0usize;
            for comp in graph.components() {
                let (sub, _) = graph.subgraph(&comp);
                if sub.edge_count() == 0 {
                    continue;
                }
                let w = weights_for_graph(&sub, None, None, None)?;
                w.verify_exact_sequence()?;
                pieces += 1;
            }
            Ok(format!("the weight maps present the class group ({pieces} pieces)"))
        }
    })();
    push_check(&mut checks, "exactness", exactness)?;

    let counts = (|| -> Result<String, Error> {
        let three = ThreeCounts::compute(&config, limit)?;
        if !three.agree() {
            return Err(Error::Invalid(format!(
                "enumeration={} formula={} tutte={} disagree",
                three.enumeration, three.formula, three.tutte
            )));
        }
        Ok(format!("enumeration=formula=tutte={}", three.enumeration))
    })();
    push_check(&mut checks, "counts", counts)?;

    let ehr = (|| -> Result<String, Error> {
        let report = EhrhartReport::compute(&config, limit)?;
        if !report.all_ok() {
            return Err(Error::Invalid(
                "the lattice-point polynomial disagrees with enumeration".into(),
            ));
        }
        let open = &report.reciprocity.1;
        Ok(format!(
            "dilations 1..3 match; reciprocity gives {} interior point{}",
            open,
            if open.is_one() { "" } else { "s" }
        ))
    })();
    push_check(&mut checks, "ehrhart", ehr)?;

    let gor = (|| -> Result<String, Error> {
        let status = gorenstein_for_graph(&graph, limit)?;
        let by_weights = doc.poset.gorenstein_from_weights()?;
        if status.verdict != by_weights {
            return Err(Error::Invalid(format!(
                "circuit route says {}, canonical-class route says {}",
                status.verdict, by_weights
            )));
        }
        Ok(format!("both routes agree: {}", status.verdict))
    })();
    push_check(&mut checks, "gorenstein", gor)?;

    let eligible =
        graph.is_connected() && is_difference_graph(&graph) && graph.edge_count() > 0;
    if eligible {
        let shared = (|| -> Result<(SignedWeights, Vec<Vec<bool>>), Error> {
            let w = doc_weights(doc, &graph)?;
            let orients = balanced::acyclic_orientations_unique_source(&graph, 0, limit)?;
            Ok((w, orients))
        })();
        match shared {
            Err(err @ Error::Limit { .. }) => return Err(CliError::limit(err.to_string())),
            Err(err) => {
                push_check(&mut checks, "orientations", Err(err))?;
                skip_check(&mut checks, "degree identity", "orientations unavailable");
            }
            Ok((w, orients)) => {
                let orientation_check = (|| -> Result<String, Error> {
                    let classes: Vec<Vec<BigInt>> = orients
                        .iter()
                        .map(|o| balanced::orientation_class(&w, o))
                        .collect::<Result<_, _>>()?;
                    let class_set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
                    let region = w.conic_region(limit)?;
                    let points: BTreeSet<Vec<BigInt>> =
                        toric::lattice_points(&region, Mode::Open, 1)?.into_iter().collect();
                    let tutte = balanced::graph_tutte(&graph, 1, 0, limit)?;
                    let by_cycles = balanced::conic_region_from_cycles(&w, limit)?;
                    let cycle_points: BTreeSet<Vec<BigInt>> =
                        toric::lattice_points(&by_cycles, Mode::Open, 1)?.into_iter().collect();
                    if class_set.len() != classes.len() || class_set != points {
                        return Err(Error::Invalid(
                            "orientation classes do not biject with the interior points".into(),
                        ));
                    }
                    if cycle_points != points {
                        return Err(Error::Invalid(
                            "the cycle route gives a different conic region".into(),
                        ));
                    }
                    if tutte != BigInt::from(orients.len()) {
                        return Err(Error::Invalid(format!(
                            "{} orientations but the graph polynomial gives {} at (1,0)",
                            orients.len(),
                            tutte
                        )));
                    }
                    Ok(format!(
                        "{} orientations = {} interior points = graph polynomial at (1,0)",
                        orients.len(),
                        points.len()
                    ))
                })();
                push_check(&mut checks, "orientations", orientation_check)?;

                let chip = (|| -> Result<String, Error> {
                    if orients.len() < 2 {
                        return Ok("single orientation; identity trivial".into());
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    let a = graph.incidence_matrix();
                    let n = graph.edge_count();
                    let pairs = 4usize;
                    for _ in 0..pairs {
                        let i = rng.gen_range(0..orients.len());
                        let j = rng.gen_range(0..orients.len());
                        let diff: Vec<BigInt> = (0..n)
                            .map(|e| {
                                BigInt::from(
                                    i64::from(orients[i][e]) - i64::from(orients[j][e]),
                                )
                            })
                            .collect();
                        let lhs = a.mul_vec(&diff);
                        let out_i = balanced::out_degrees(&graph, &orients[i])?;
                        let out_j = balanced::out_degrees(&graph, &orients[j])?;
                        let rhs: Vec<BigInt> =
                            out_j.iter().zip(&out_i).map(|(x, y)| x - y).collect();
                        if lhs != rhs {
                            return Err(Error::Invalid(
                                "an orientation pair violates the degree identity".into(),
                            ));
                        }
                    }
                    Ok(format!(
                        "{} random orientation pairs satisfy the degree identity (seed {})",
                        pairs, opts.seed
                    ))
                })();
                push_check(&mut checks, "degree identity", chip)?;
            }
        }
    } else {
        let reason = "needs a connected diagram of difference roots";
        skip_check(&mut checks, "orientations", reason);
        skip_check(&mut checks, "degree identity", reason);
    }

    let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
    let skipped = checks.iter().filter(|c| c.status == CheckStatus::Skipped).count();
    let passed = checks.len() - failed - skipped;

    let mut text = String::new();
    for check in &checks {
        let line = match check.status {
            CheckStatus::Ok => format!("ok {}: {}\n", check.name, check.detail),
            CheckStatus::Fail => format!("FAIL {}: {}\n", check.name, check.detail),
            CheckStatus::Skipped => {
                format!("-- {}: skipped ({})\n", check.name, check.detail)
            }
        };
        text.push_str(&line);
    }
    if failed == 0 {
        if skipped == 0 {
            text.push_str(&format!("all {passed} checks passed\n"));
        } else {
            text.push_str(&format!("all {passed} checks passed ({skipped} skipped)\n"));
        }
    } else {
        text.push_str(&format!("{failed} of {} checks FAILED\n", failed + passed));
    }

    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            let status = match c.status {
                CheckStatus::Ok => "ok",
                CheckStatus::Fail => "fail",
                CheckStatus::Skipped => "skipped",
            };
            json!({ "name": c.name, "status": status, "detail": c.detail })
        })
        .collect();
    let value = json!({
        "schema": SCHEMA,
        "command": "verify",
        "checks": rows,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
    });
    Ok(finish(opts, text, value, if failed == 0 { 0 } else { EXIT_INVARIANT }))
}
