//! Balanced diagrams and difference roots. A poset whose diagram has only
//! positive circles can be switched, and its halfedges absorbed into one
//! extra coordinate, so that every generator becomes a difference
//! chi_head - chi_tail; the monomial ring only changes by a Laurent
//! variable. In that shape the circuits are the cycles of the underlying
//! graph, the conic region has one slab per cycle counting forward and
//! backward edges, and the interior lattice points biject with the acyclic
//! orientations having a unique source at any fixed vertex.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, Sign};
use crate::poset::{self, SignedPoset, SignedWeights};
use crate::toric::{ConicPolytope, Facet};

/// A switched and halfedge-free presentation of a poset with a balanced
/// diagram. Edge order is preserved; halfedges become edges to one new
/// vertex.
#[derive(Debug, Clone)]
pub struct TypeAReduction {
    /// The reduced poset; every root is a difference.
    pub poset: SignedPoset,
    /// Diagram of the reduced poset, edges in the original order.
    pub graph: BidirectedGraph,
    /// Vertices whose endpoint signs were flipped.
    pub switching: Vec<usize>,
    /// The vertex absorbing the halfedges, when there were any.
    pub new_vertex: Option<usize>,
}

/// True when every edge is ordinary with one Plus and one Minus end,
/// i.e. every incidence column is a difference of unit vectors.
pub fn is_difference_graph(graph: &BidirectedGraph) -> bool {
    graph.edges().iter().all(|e| e.sign() == Some(Sign::Plus))
}

/// Tail and head of a difference edge: the Minus end points to the Plus
/// end.
pub fn edge_direction(graph: &BidirectedGraph, e: usize) -> Result<(usize, usize)> {
    match *graph.edge(e) {
        Edge::Ordinary { u, v, tau_u: Sign::Minus, tau_v: Sign::Plus } => Ok((u, v)),
        Edge::Ordinary { u, v, tau_u: Sign::Plus, tau_v: Sign::Minus } => Ok((v, u)),
        _ => Err(Error::Invalid(format!("edge {} is not a difference root", e + 1))),
    }
}

/// Reduce a connected diagram with positive circles to difference form:
/// switch the smaller side of the two-coloring (ties broken
/// lexicographically), then replace each halfedge at v by an edge from v
/// to one shared new vertex, keeping the sign at v.
pub fn reduce_graph(graph: &BidirectedGraph) -> Result<TypeAReduction> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let switching = graph.switching_set()?;
    let switched = graph.switch(&switching);
    let d = switched.vertex_count();
    let has_half = !switched.halfedge_indices().is_empty();
    let edges: Vec<Edge> = switched
        .edges()
        .iter()
        .map(|e| match *e {
            Edge::Halfedge { v, tau } => {
                Edge::Ordinary { u: v, v: d, tau_u: tau, tau_v: tau.flip() }
            }
            other => other,
        })
        .collect();
    let reduced = BidirectedGraph::new(d + usize::from(has_half), edges)?;
    if !is_difference_graph(&reduced) {
        return Err(Error::Invalid("switching failed to make every edge a difference".into()));
    }
    let roots = poset::roots_from_config(&reduced.config()?)?;
    let poset = SignedPoset::new(reduced.vertex_count(), roots)?;
    Ok(TypeAReduction {
        poset,
        graph: reduced,
        switching,
        new_vertex: has_half.then_some(d),
    })
}

/// Reduce a poset through its diagram; see `reduce_graph`.
pub fn reduce(poset: &SignedPoset) -> Result<TypeAReduction> {
    reduce_graph(&poset.hasse()?)
}

/// The poset of an abstract partial order on `size` elements, given by any
/// list of strict relations (their transitive closure must be irreflexive).
/// With a bottom and a top adjoined, every cover from the bottom becomes a
/// single positive coordinate, every other cover p_i < p_j the difference
/// chi_j - chi_i, and covers into the top use the extra coordinate `size`.
pub fn hibi(size: usize, relations: &[(usize, usize)]) -> Result<SignedPoset> {
    if size == 0 {
        return Err(Error::Invalid("the order needs at least one element".into()));
    }
    let mut lt = vec![vec![false; size]; size];
    for &(i, j) in relations {
        if i >= size || j >= size {
            return Err(Error::Invalid(format!(
                "relation ({}, {}) uses an element past {}",
                i + 1,
                j + 1,
                size
            )));
        }
        if i == j {
            return Err(Error::Invalid(format!("element {} cannot precede itself", i + 1)));
        }
        lt[i][j] = true;
    }
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    for (i, row) in lt.iter().enumerate() {
        if row[i] {
            return Err(Error::Invalid(format!(
                "the relations put element {} in a cycle",
                i + 1
            )));
        }
    }
    let cover = |i: usize, j: usize| lt[i][j] && !(0..size).any(|k| lt[i][k] && lt[k][j]);
    let mut roots = Vec::new();
    for j in 0..size {
        if !lt.iter().any(|row| row[j]) {
            roots.push(poset::Root::short(j, Sign::Plus));
        }
    }
    for i in 0..size {
        for j in 0..size {
            if cover(i, j) {
                roots.push(poset::Root::long(i, Sign::Minus, j, Sign::Plus)?);
            }
        }
    }
    for (i, row) in lt.iter().enumerate() {
        if !row.contains(&true) {
            roots.push(poset::Root::long(i, Sign::Minus, size, Sign::Plus)?);
        }
    }
    SignedPoset::new(size + 1, roots)
}

/// All elementary cycles of the underlying graph, as sorted edge index
/// lists in lexicographic order. Halfedges never participate.
pub fn cycles(graph: &BidirectedGraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = graph.edge_count();
    if n > limit.min(60) {
        return Err(Error::Limit { required: n, limit: limit.min(60) });
    }
    let half: u64 = graph
        .halfedge_indices()
        .iter()
        .fold(0, |acc, &e| acc | 1u64 << e);
    let mut out = Vec::new();
    'subset: for mask in 1u64..1 << n {
        if mask & half != 0 {
            continue;
        }
        let mut degree: HashMap<usize, usize> = HashMap::new();
        let mut members = Vec::new();
        for e in 0..n {
            if mask >> e & 1 == 1 {
                members.push(e);
                for v in graph.edge(e).endpoints() {
                    *degree.entry(v).or_insert(0) += 1;
                }
            }
        }
        if degree.values().any(|&d| d != 2) {
            continue;
        }
        // Connectivity over the subset edges.
        let mut seen_v = BTreeSet::new();
        let mut stack = vec![graph.edge(members[0]).endpoints()[0]];
        seen_v.insert(stack[0]);
        let mut reached = 0usize;
        let mut used = vec![false; n];
        while let Some(v) = stack.pop() {
            for &e in &members {
                if used[e] || !graph.edge(e).endpoints().contains(&v) {
                    continue;
                }
                used[e] = true;
                reached += 1;
                for w in graph.edge(e).endpoints() {
                    if seen_v.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        if reached != members.len() {
            continue 'subset;
        }
        out.push(members);
    }
    out.sort();
    Ok(out)
}

/// Walk an elementary cycle of a difference graph once and split its edges
/// by traversal direction: forward edges are crossed tail to head.
fn split_cycle(
    graph: &BidirectedGraph,
    cycle: &[usize],
) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in cycle {
        for v in graph.edge(e).endpoints() {
            at.entry(v).or_default().push(e);
        }
    }
    let first = cycle[0];
    let (start, mut cur_v) = edge_direction(graph, first)?;
    let mut forward: BTreeSet<usize> = [first].into();
    let mut backward = BTreeSet::new();
    let mut cur_e = first;
    while cur_v != start {
        let next = *at[&cur_v]
            .iter()
            .find(|&&e| e != cur_e)
            .ok_or_else(|| Error::Invalid("not an elementary cycle".into()))?;
        let (tail, head) = edge_direction(graph, next)?;
        if tail == cur_v {
            forward.insert(next);
            cur_v = head;
        } else {
            backward.insert(next);
            cur_v = tail;
        }
        cur_e = next;
    }
    if forward.len() + backward.len() != cycle.len() {
        return Err(Error::Invalid("not an elementary cycle".into()));
    }
    Ok((forward, backward))
}

/// Conic region of a difference diagram computed from its graph cycles
/// alone: each cycle contributes the slab
/// -(backward count) < <functional, z> < (forward count), with the
/// functional read off the basis edges the cycle crosses.
pub fn conic_region_from_cycles(w: &SignedWeights, limit: usize) -> Result<ConicPolytope> {
    let graph = &w.system.graph;
    if !is_difference_graph(graph) {
        return Err(Error::Invalid("the cycle description needs difference roots".into()));
    }
    let t = w.ambient_dim();
    let mut facets = Vec::new();
    for cycle in cycles(graph, limit)? {
        let (forward, backward) = split_cycle(graph, &cycle)?;
        let mut functional = vec![BigInt::zero(); t];
        for (i, &eps) in w.system.epsilons.iter().enumerate() {
            if forward.contains(&eps) {
                functional[i] = w.weights.kernel.get(eps, i).clone();
            } else if backward.contains(&eps) {
                functional[i] = -w.weights.kernel.get(eps, i);
            }
        }
        facets.push(Facet {
            functional,
            lower: -BigInt::from(backward.len()),
            upper: BigInt::from(forward.len()),
            circuit: cycle,
        });
    }
    Ok(ConicPolytope { ambient_dim: t, facets })
}

fn directions(graph: &BidirectedGraph) -> Result<Vec<(usize, usize)>> {
    (0..graph.edge_count()).map(|e| edge_direction(graph, e)).collect()
}

fn is_acyclic(vertex_count: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; vertex_count];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for &(t, h) in arcs {
        indeg[h] += 1;
        out[t].push(h);
    }
    let mut queue: Vec<usize> = (0..vertex_count).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0usize;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &h in &out[v] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                queue.push(h);
            }
        }
    }
    removed == vertex_count
}

/// Orientations of a connected difference diagram that are acyclic with
/// their only source at `source`. Entry e is true when edge e keeps its
/// own direction (tail to head) and false when it is reversed.
pub fn acyclic_orientations_unique_source(
    graph: &BidirectedGraph,
    source: usize,
    limit: usize,
) -> Result<Vec<Vec<bool>>> {
    if source >= graph.vertex_count() {
        return Err(Error::Invalid(format!("no vertex {}", source + 1)));
    }
    let dirs = directions(graph)?;
    let n = graph.edge_count();
    if n > limit.min(60) {
        return Err(Error::Limit { required: n, limit: limit.min(60) });
    }
    let d = graph.vertex_count();
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        let orientation: Vec<bool> = (0..n).map(|e| mask >> e & 1 == 1).collect();
        let arcs: Vec<(usize, usize)> = dirs
            .iter()
            .zip(&orientation)
            .map(|(&(t, h), &keep)| if keep { (t, h) } else { (h, t) })
            .collect();
        let mut indeg = vec![0usize; d];
        for &(_, h) in &arcs {
            indeg[h] += 1;
        }
        let sources: Vec<usize> = (0..d).filter(|&v| indeg[v] == 0).collect();
        if sources != [source] || !is_acyclic(d, &arcs) {
            continue;
        }
        out.push(orientation);
    }
    Ok(out)
}

/// Class of an orientation: the sum of the weights of the edges on which
/// it agrees with the diagram's own directions.
pub fn orientation_class(w: &SignedWeights, orientation: &[bool]) -> Result<Vec<BigInt>> {
    let n = w.config.len();
    if orientation.len() != n {
        return Err(Error::Invalid(format!(
            "expected {} orientation entries, got {}",
            n,
            orientation.len()
        )));
    }
    let t = w.ambient_dim();
    let mut class = vec![BigInt::zero(); t];
    for (e, &forward) in orientation.iter().enumerate() {
        if forward {
            for (i, x) in w.free(e).into_iter().enumerate() {
                class[i] += x;
            }
        }
    }
    Ok(class)
}

/// Out-degree of every vertex under an orientation of a difference
/// diagram.
pub fn out_degrees(graph: &BidirectedGraph, orientation: &[bool]) -> Result<Vec<BigInt>> {
    let dirs = directions(graph)?;
    if orientation.len() != dirs.len() {
        return Err(Error::Invalid(format!(
            "expected {} orientation entries, got {}",
            dirs.len(),
            orientation.len()
        )));
    }
    let mut out = vec![BigInt::zero(); graph.vertex_count()];
    for (&(t, h), &keep) in dirs.iter().zip(orientation) {
        let from = if keep { t } else { h };
        out[from] += 1;
    }
    Ok(out)
}

/// Tutte polynomial of the underlying graph evaluated at integers, by the
/// subset expansion with ranks counted through connected components.
pub fn graph_tutte(graph: &BidirectedGraph, x: i64, y: i64, limit: usize) -> Result<BigInt> {
    if !graph.halfedge_indices().is_empty() {
        return Err(Error::Invalid("the graph expansion needs ordinary edges only".into()));
    }
    let n = graph.edge_count();
    if n > limit.min(60) {
        return Err(Error::Limit { required: n, limit: limit.min(60) });
    }
    let d = graph.vertex_count();
    let rank_of = |mask: u64| -> usize {
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut rank = 0usize;
        for e in 0..graph.edge_count() {
            if mask >> e & 1 == 0 {
                continue;
            }
            let ends = graph.edge(e).endpoints();
            let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            if a != b {
                parent[a] = b;
                rank += 1;
            }
        }
        rank
    };
    let full_rank = rank_of((1u64 << n) - 1);
    let xf = BigInt::from(x - 1);
    let yf = BigInt::from(y - 1);
    let mut total = BigInt::zero();
    for mask in 0u64..1 << n {
        let size = mask.count_ones() as usize;
        let r = rank_of(mask);
        total += num_traits::pow(xf.clone(), full_rank - r) * num_traits::pow(yf.clone(), size - r);
    }
    Ok(total)
}
