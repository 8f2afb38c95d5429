//! Bidirected graphs: edges carry a sign at each endpoint, and halfedges
//! have a single signed endpoint. Such a graph encodes a configuration of
//! vectors chi_u, chi_v combinations through its incidence matrix, and the
//! independent edge sets of that configuration have a purely combinatorial
//! description: every connected piece is a tree, a tree plus one halfedge,
//! or a tree plus one edge closing a negative circle. This module provides
//! that structural view: independence testing, circuit enumeration with
//! canonical walks, balance and switching, and circle enumeration.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::matroid::VectorConfig;

/// Endpoint sign: Plus means the edge points into the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Ordinary { u: usize, v: usize, tau_u: Sign, tau_v: Sign },
    Halfedge { v: usize, tau: Sign },
}

impl Edge {
    pub fn is_halfedge(&self) -> bool {
        matches!(self, Edge::Halfedge { .. })
    }

    /// Endpoint vertices (one entry for a halfedge).
    pub fn endpoints(&self) -> Vec<usize> {
        match *self {
            Edge::Ordinary { u, v, .. } => vec![u, v],
            Edge::Halfedge { v, .. } => vec![v],
        }
    }

    /// Sign of the edge at a vertex, None if not incident.
    pub fn tau_at(&self, vertex: usize) -> Option<Sign> {
        match *self {
            Edge::Ordinary { u, v, tau_u, tau_v } => {
                if vertex == u {
                    Some(tau_u)
                } else if vertex == v {
                    Some(tau_v)
                } else {
                    None
                }
            }
            Edge::Halfedge { v, tau } => {
                if vertex == v {
                    Some(tau)
                } else {
                    None
                }
            }
        }
    }

    /// Edge sign: negative when both endpoint signs agree. Halfedges have
    /// no sign.
    pub fn sign(&self) -> Option<Sign> {
        match *self {
            Edge::Ordinary { tau_u, tau_v, .. } => Some(tau_u.times(tau_v).flip()),
            Edge::Halfedge { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidirectedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// Balance report: a proper two-coloring with s(u)s(v) = sign(e) on every
/// ordinary edge, or a witness negative circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Balance {
    Balanced { coloring: Vec<Sign> },
    Unbalanced { circle: Vec<usize> },
}

/// Shape of a connected graph, deciding how a maximal independent edge set
/// is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphCase {
    /// No halfedges and balanced: spanning tree, one free class per extra
    /// edge plus one.
    Balanced,
    /// At least one halfedge: spanning tree plus a halfedge.
    WithHalfedge,
    /// No halfedges, unbalanced: spanning tree plus an edge closing a
    /// negative circle, with a two-torsion class.
    Unbalanced,
}

/// Walk through the graph: edges[i] and edges[i+1] meet at vertices[i].
/// Closed walks also share the outer endpoints of the first and last edge;
/// walks that start and end with halfedges have loose outer ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitKind {
    /// A single positive circle; every edge once.
    PositiveCircle,
    /// Two negative circles joined by a path; path edges twice.
    CirclePair,
    /// A negative circle joined to a halfedge; path and halfedge twice.
    CircleHalfedge,
    /// Two halfedges joined by a path; every edge once.
    HalfedgePair,
}

/// Minimal dependent edge set with its canonical walk and kernel vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralCircuit {
    pub support: Vec<usize>,
    pub kind: CircuitKind,
    pub walk: Walk,
    pub vector: Vec<BigInt>,
}

/// Circle (simple cycle, digons included) with its sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub edges: Vec<usize>,
    pub sign: Sign,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Ordinary-edge chain with explicit vertex sequence (one more vertex than
/// edges). Used to assemble canonical walks from circle and path pieces.
#[derive(Debug, Clone)]
struct Chain {
    edges: Vec<usize>,
    verts: Vec<usize>,
}

impl Chain {
    fn reversed(&self) -> Chain {
        let mut edges = self.edges.clone();
        let mut verts = self.verts.clone();
        edges.reverse();
        verts.reverse();
        Chain { edges, verts }
    }
}

impl BidirectedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<BidirectedGraph> {
        for (i, e) in edges.iter().enumerate() {
            match *e {
                Edge::Ordinary { u, v, .. } => {
                    if u >= vertex_count || v >= vertex_count {
                        return Err(Error::Invalid(format!("edge e{} leaves the vertex range", i + 1)));
                    }
                    if u == v {
                        return Err(Error::Invalid(format!("edge e{} is a loop", i + 1)));
                    }
                }
                Edge::Halfedge { v, .. } => {
                    if v >= vertex_count {
                        return Err(Error::Invalid(format!("edge e{} leaves the vertex range", i + 1)));
                    }
                }
            }
        }
        Ok(BidirectedGraph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn halfedge_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_halfedge()).collect()
    }

    pub fn tau(&self, edge: usize, vertex: usize) -> Option<Sign> {
        self.edges[edge].tau_at(vertex)
    }

    /// Vertex-by-edge incidence matrix; column e holds tau(e, v) chi_v
    /// summed over the endpoints of e.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.vertex_count, self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            for v in e.endpoints() {
                m.set(v, j, BigInt::from(e.tau_at(v).unwrap().value()));
            }
        }
        m
    }

    /// The incidence columns as a vector configuration.
    pub fn config(&self) -> Result<VectorConfig> {
        let m = self.incidence_matrix();
        let cols = (0..m.cols()).map(|j| m.col(j)).collect();
        VectorConfig::new(self.vertex_count, cols)
    }

    /// Vertex partition into connected components (ordinary edges only;
    /// halfedges attach to a vertex without connecting anything).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.vertex_count);
        for e in &self.edges {
            if let Edge::Ordinary { u, v, .. } = *e {
                dsu.union(u, v);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..self.vertex_count {
            groups.entry(dsu.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Restriction to a sorted vertex subset: keeps edges with all
    /// endpoints inside, relabels vertices by position. Returns the graph
    /// together with the original index of each kept edge.
    pub fn subgraph(&self, vertices: &[usize]) -> (BidirectedGraph, Vec<usize>) {
        let pos: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let kept = match *e {
                Edge::Ordinary { u, v, tau_u, tau_v } => match (pos.get(&u), pos.get(&v)) {
                    (Some(&pu), Some(&pv)) => {
                        Some(Edge::Ordinary { u: pu, v: pv, tau_u, tau_v })
                    }
                    _ => None,
                },
                Edge::Halfedge { v, tau } => {
                    pos.get(&v).map(|&pv| Edge::Halfedge { v: pv, tau })
                }
            };
            if let Some(e) = kept {
                edges.push(e);
                edge_map.push(i);
            }
        }
        let g = BidirectedGraph { vertex_count: vertices.len(), edges };
        (g, edge_map)
    }

    fn subset_components(&self, subset: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut dsu = Dsu::new(self.vertex_count);
        for &ei in subset {
            if let Edge::Ordinary { u, v, .. } = self.edges[ei] {
                dsu.union(u, v);
            }
        }
        let mut comp: HashMap<usize, (Vec<usize>, BTreeSet<usize>)> = HashMap::new();
        for &ei in subset {
            let root = dsu.find(self.edges[ei].endpoints()[0]);
            let entry = comp.entry(root).or_default();
            entry.0.push(ei);
            for v in self.edges[ei].endpoints() {
                entry.1.insert(v);
            }
        }
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = comp
            .into_values()
            .map(|(edges, verts)| (edges, verts.into_iter().collect()))
            .collect();
        out.sort();
        out
    }

    /// Strip leaves from an ordinary-edge set until only its circles
    /// remain; returns the surviving edges.
    fn peel_to_circles(&self, edges: &[usize]) -> Vec<usize> {
        let mut alive: HashSet<usize> = edges.iter().copied().collect();
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &ei in edges {
            for v in self.edges[ei].endpoints() {
                *deg.entry(v).or_insert(0) += 1;
            }
        }
        let mut queue: VecDeque<usize> =
            deg.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
        while let Some(v) = queue.pop_front() {
            if deg.get(&v) != Some(&1) {
                continue;
            }
            let ei = match alive
                .iter()
                .find(|&&e| self.edges[e].endpoints().contains(&v))
            {
                Some(&e) => e,
                None => continue,
            };
            alive.remove(&ei);
            for w in self.edges[ei].endpoints() {
                let d = deg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 1 {
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<usize> = alive.into_iter().collect();
        out.sort();
        out
    }

    fn circle_sign(&self, edges: &[usize]) -> Sign {
        edges
            .iter()
            .map(|&e| self.edges[e].sign().expect("circle edges are ordinary"))
            .fold(Sign::Plus, Sign::times)
    }

    /// Independence test for the signed-graphic structure: every connected
    /// piece must be a tree, a tree with one halfedge, or a tree plus one
    /// edge closing a negative circle.
    pub fn is_pseudo_forest(&self, subset: &[usize]) -> bool {
        for (edges, verts) in self.subset_components(subset) {
            let h = edges.iter().filter(|&&e| self.edges[e].is_halfedge()).count();
            let o = edges.len() - h;
            let v = verts.len();
            let ok = match (h, o == v - 1, o == v) {
                (0, true, _) => true,
                (1, true, _) => true,
                (0, false, true) => {
                    let ordinary: Vec<usize> = edges
                        .iter()
                        .copied()
                        .filter(|&e| !self.edges[e].is_halfedge())
                        .collect();
                    let circle = self.peel_to_circles(&ordinary);
                    self.circle_sign(&circle) == Sign::Minus
                }
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Lex-first spanning forest of the ordinary edges.
    fn greedy_tree(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.vertex_count);
        let mut tree = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if let Edge::Ordinary { u, v, .. } = *e {
                if dsu.union(u, v) {
                    tree.push(i);
                }
            }
        }
        tree
    }

    /// Edge path between two vertices inside a forest.
    fn tree_path(&self, tree: &[usize], from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![]);
        }
        let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for &ei in tree {
            if let Edge::Ordinary { u, v, .. } = self.edges[ei] {
                adj.entry(u).or_default().push((ei, v));
                adj.entry(v).or_default().push((ei, u));
            }
        }
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &(ei, y) in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    prev.insert(y, (ei, x));
                    queue.push_back(y);
                }
            }
        }
        if !seen.contains(&to) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (ei, back) = prev[&cur];
            path.push(ei);
            cur = back;
        }
        path.reverse();
        Some(path)
    }

    /// Two-coloring along ordinary edges, or a witness negative circle.
    pub fn balance(&self) -> Balance {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            if let Edge::Ordinary { u, v, .. } = *e {
                adj[u].push((i, v));
                adj[v].push((i, u));
            }
        }
        let mut coloring: Vec<Option<Sign>> = vec![None; self.vertex_count];
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        for root in 0..self.vertex_count {
            if coloring[root].is_some() {
                continue;
            }
            coloring[root] = Some(Sign::Plus);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let sx = coloring[x].unwrap();
                for &(ei, y) in &adj[x] {
                    let sign = self.edges[ei].sign().unwrap();
                    let want = sx.times(sign);
                    match coloring[y] {
                        None => {
                            coloring[y] = Some(want);
                            parent.insert(y, (ei, x));
                            queue.push_back(y);
                        }
                        Some(sy) => {
                            if sy != want && parent.get(&x).map(|&(pe, _)| pe) != Some(ei)
                                && parent.get(&y).map(|&(pe, _)| pe) != Some(ei)
                            {
                                let mut circle = vec![ei];
                                let chain = |mut v: usize| {
                                    let mut seq = vec![v];
                                    while let Some(&(_, p)) = parent.get(&v) {
                                        seq.push(p);
                                        v = p;
                                    }
                                    seq
                                };
                                let ax = chain(x);
                                let ay = chain(y);
                                let common: HashSet<usize> = ax
                                    .iter()
                                    .copied()
                                    .filter(|v| ay.contains(v))
                                    .collect();
                                let lca = *ax.iter().find(|v| common.contains(v)).unwrap();
                                for &v in ax.iter().take_while(|&&v| v != lca) {
                                    circle.push(parent[&v].0);
                                }
                                for &v in ay.iter().take_while(|&&v| v != lca) {
                                    circle.push(parent[&v].0);
                                }
                                circle.sort();
                                circle.dedup();
                                return Balance::Unbalanced { circle };
                            }
                        }
                    }
                }
            }
        }
        Balance::Balanced { coloring: coloring.into_iter().map(|s| s.unwrap()).collect() }
    }

    /// Vertices to switch so that every ordinary edge becomes positive.
    /// Per component the two candidate sides are compared by size, then
    /// lexicographically.
    pub fn switching_set(&self) -> Result<Vec<usize>> {
        let coloring = match self.balance() {
            Balance::Unbalanced { circle } => {
                return Err(Error::Unbalanced { negative_circle: circle })
            }
            Balance::Balanced { coloring } => coloring,
        };
        let mut out = Vec::new();
        for comp in self.components() {
            let minus: Vec<usize> =
                comp.iter().copied().filter(|&v| coloring[v] == Sign::Minus).collect();
            let plus: Vec<usize> =
                comp.iter().copied().filter(|&v| coloring[v] == Sign::Plus).collect();
            let pick = if minus.len() < plus.len() {
                minus
            } else if plus.len() < minus.len() {
                plus
            } else if minus <= plus {
                minus
            } else {
                plus
            };
            out.extend(pick);
        }
        out.sort();
        Ok(out)
    }

    /// Flip the endpoint signs at the given vertices.
    pub fn switch(&self, set: &[usize]) -> BidirectedGraph {
        let flip: HashSet<usize> = set.iter().copied().collect();
        let edges = self
            .edges
            .iter()
            .map(|e| match *e {
                Edge::Ordinary { u, v, tau_u, tau_v } => Edge::Ordinary {
                    u,
                    v,
                    tau_u: if flip.contains(&u) { tau_u.flip() } else { tau_u },
                    tau_v: if flip.contains(&v) { tau_v.flip() } else { tau_v },
                },
                Edge::Halfedge { v, tau } => Edge::Halfedge {
                    v,
                    tau: if flip.contains(&v) { tau.flip() } else { tau },
                },
            })
            .collect();
        BidirectedGraph { vertex_count: self.vertex_count, edges }
    }

    /// Shape classification of a connected graph together with a maximal
    /// independent edge set built the standard way: a lex-first spanning
    /// tree, extended by the lowest halfedge when one exists, or by the
    /// lowest edge closing a negative circle when the graph is unbalanced.
    pub fn spanning_structure(&self) -> Result<(GraphCase, Vec<usize>)> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut basis = self.greedy_tree();
        let halfedges = self.halfedge_indices();
        if let Some(&h) = halfedges.first() {
            basis.push(h);
            basis.sort();
            return Ok((GraphCase::WithHalfedge, basis));
        }
        match self.balance() {
            Balance::Balanced { .. } => Ok((GraphCase::Balanced, basis)),
            Balance::Unbalanced { .. } => {
                let tree = basis.clone();
                let in_tree: HashSet<usize> = tree.iter().copied().collect();
                for (i, e) in self.edges.iter().enumerate() {
                    if in_tree.contains(&i) {
                        continue;
                    }
                    if let Edge::Ordinary { u, v, .. } = *e {
                        let mut circle = self.tree_path(&tree, u, v).unwrap();
                        circle.push(i);
                        if self.circle_sign(&circle) == Sign::Minus {
                            basis.push(i);
                            basis.sort();
                            return Ok((GraphCase::Unbalanced, basis));
                        }
                    }
                }
                unreachable!("unbalanced graph must close a negative circle over its tree")
            }
        }
    }

    /// Edges of the unique minimal dependent set inside forest + eps.
    pub fn fundamental_circuit(&self, forest: &[usize], eps: usize) -> Result<Vec<usize>> {
        if !self.is_pseudo_forest(forest) {
            return Err(Error::Invalid("chosen edge set is not independent".into()));
        }
        let mut full: Vec<usize> = forest.to_vec();
        full.push(eps);
        full.sort();
        full.dedup();
        if self.is_pseudo_forest(&full) {
            return Err(Error::Invalid(format!(
                "edge e{} stays independent over the chosen set",
                eps + 1
            )));
        }
        let mut support = vec![eps];
        for &f in forest {
            let candidate: Vec<usize> = full.iter().copied().filter(|&x| x != f).collect();
            if self.is_pseudo_forest(&candidate) {
                support.push(f);
            }
        }
        support.sort();
        Ok(support)
    }

    /// All minimal dependent edge sets, found with the combinatorial
    /// independence oracle, each with its canonical walk and kernel vector.
    pub fn circuits(&self, limit: usize) -> Result<Vec<StructuralCircuit>> {
        let n = self.edges.len();
        if n > limit {
            return Err(Error::Limit { required: n, limit });
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        seen.insert(vec![]);
        let mut supports: BTreeSet<Vec<usize>> = BTreeSet::new();
        while let Some(set) = frontier.pop() {
            let start = set.last().map_or(0, |&x| x + 1);
            for next in start..n {
                let mut cand = set.clone();
                cand.push(next);
                if self.is_pseudo_forest(&cand) {
                    if seen.insert(cand.clone()) {
                        frontier.push(cand);
                    }
                } else {
                    let minimal = (0..cand.len()).all(|k| {
                        let mut sub = cand.clone();
                        sub.remove(k);
                        self.is_pseudo_forest(&sub)
                    });
                    if minimal {
                        supports.insert(cand);
                    }
                }
            }
        }
        supports
            .into_iter()
            .map(|support| self.circuit_from_support(&support, None))
            .collect()
    }

    /// Build the canonical walk of a circuit; `preferred` asks for a walk
    /// whose first traversal of that edge carries a plus sign, honored
    /// whenever the circuit shape allows it.
    pub fn circuit_from_support(
        &self,
        support: &[usize],
        preferred: Option<usize>,
    ) -> Result<StructuralCircuit> {
        let (kind, walk) = self.canonical_walk(support, preferred)?;
        let vector = self.walk_vector(&walk)?;
        Ok(StructuralCircuit { support: support.to_vec(), kind, walk, vector })
    }

    fn support_adjacency(&self, ordinary: &[usize]) -> HashMap<usize, Vec<(usize, usize)>> {
        let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for &ei in ordinary {
            if let Edge::Ordinary { u, v, .. } = self.edges[ei] {
                adj.entry(u).or_default().push((ei, v));
                adj.entry(v).or_default().push((ei, u));
            }
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }

    /// Walk a degree-two chain: cross `first` from `from`, then keep
    /// going until a vertex outside the chain interior (a junction) is
    /// reached. Junctions are the vertices with degree other than two,
    /// plus the starting vertex.
    fn follow_chain(
        adj: &HashMap<usize, Vec<(usize, usize)>>,
        from: usize,
        first: usize,
        junctions: &HashSet<usize>,
    ) -> Chain {
        let mut edges = vec![first];
        let mut verts = vec![from];
        let mut prev_edge = first;
        let mut cur = adj[&from]
            .iter()
            .find(|&&(e, _)| e == first)
            .map(|&(_, w)| w)
            .unwrap();
        verts.push(cur);
        while !junctions.contains(&cur) {
            let &(next, w) = adj[&cur].iter().find(|&&(e, _)| e != prev_edge).unwrap();
            edges.push(next);
            verts.push(w);
            prev_edge = next;
            cur = w;
        }
        Chain { edges, verts }
    }

    /// Traverse a circle from a vertex on it, starting with its lowest
    /// incident circle edge (or a requested one).
    fn circle_chain(
        &self,
        circle: &[usize],
        at: usize,
        via: Option<usize>,
    ) -> Chain {
        let adj = self.support_adjacency(circle);
        let first = via.unwrap_or_else(|| adj[&at][0].0);
        let junctions = HashSet::from([at]);
        Self::follow_chain(&adj, at, first, &junctions)
    }

    fn canonical_walk(
        &self,
        support: &[usize],
        preferred: Option<usize>,
    ) -> Result<(CircuitKind, Walk)> {
        let halfedges: Vec<usize> =
            support.iter().copied().filter(|&e| self.edges[e].is_halfedge()).collect();
        let ordinary: Vec<usize> =
            support.iter().copied().filter(|&e| !self.edges[e].is_halfedge()).collect();
        let adj = self.support_adjacency(&ordinary);
        let degree = |v: usize| adj.get(&v).map_or(0, |l| l.len());
        match halfedges.len() {
            0 => {
                let mut js: Vec<usize> = adj.keys().copied().filter(|&v| degree(v) >= 3).collect();
                js.sort();
                if js.is_empty() {
                    // Single positive circle.
                    let start = *ordinary.iter().min().unwrap();
                    let ends = self.edges[start].endpoints();
                    let other_edge = |v: usize| {
                        adj[&v].iter().find(|&&(e, _)| e != start).map(|&(e, _)| e).unwrap()
                    };
                    let (a, b) = (ends[0], ends[1]);
                    let via = if (other_edge(a), a) <= (other_edge(b), b) { a } else { b };
                    let chain = self.walk_circle_from(start, via, &adj, ordinary.len());
                    let walk = Self::chain_to_walk(chain);
                    let walk = self.rotate_to(&walk, preferred);
                    return Ok((CircuitKind::PositiveCircle, walk));
                }
                if js.len() == 1 {
                    // Two circles sharing one vertex of degree four.
                    let j = js[0];
                    let stops = HashSet::from([j]);
                    let first = Self::follow_chain(&adj, j, adj[&j][0].0, &stops);
                    let used: HashSet<usize> = first.edges.iter().copied().collect();
                    let via2 = adj[&j].iter().find(|&&(e, _)| !used.contains(&e)).unwrap().0;
                    let second = Self::follow_chain(&adj, j, via2, &stops);
                    let (c1, c2) = Self::order_circles(first, second);
                    let walk = Self::chain_to_walk(Self::concat(vec![c1, c2]));
                    let walk = self.rotate_to(&walk, preferred);
                    return Ok((CircuitKind::CirclePair, walk));
                }
                // Two disjoint circles joined by a path between junctions.
                let junctions: HashSet<usize> = js.iter().copied().collect();
                let (j1, j2) = (js[0], js[1]);
                let mut path = None;
                for &(e, _) in &adj[&j1] {
                    let chain = Self::follow_chain(&adj, j1, e, &junctions);
                    if *chain.verts.last().unwrap() == j2 {
                        path = Some(chain);
                        break;
                    }
                }
                let path = path.expect("junctions of a circuit are joined by a path");
                let on_path: HashSet<usize> = path.edges.iter().copied().collect();
                let circle_at = |j: usize| -> Chain {
                    let via = adj[&j].iter().find(|&&(e, _)| !on_path.contains(&e)).unwrap().0;
                    let stops = HashSet::from([j]);
                    Self::follow_chain(&adj, j, via, &stops)
                };
                let (c1, c2) = Self::order_circles(circle_at(j1), circle_at(j2));
                let (path_fwd, path_back) = if c1.verts[0] == j1 {
                    (path.clone(), path.reversed())
                } else {
                    (path.reversed(), path.clone())
                };
                let walk =
                    Self::chain_to_walk(Self::concat(vec![c1, path_fwd, c2, path_back]));
                let walk = self.rotate_to(&walk, preferred);
                Ok((CircuitKind::CirclePair, walk))
            }
            1 => {
                let h = halfedges[0];
                let vh = self.edges[h].endpoints()[0];
                let (path, junction) = if degree(vh) == 2 {
                    (Chain { edges: vec![], verts: vec![vh] }, vh)
                } else {
                    let junctions: HashSet<usize> =
                        adj.keys().copied().filter(|&v| degree(v) != 2).collect();
                    let chain = Self::follow_chain(&adj, vh, adj[&vh][0].0, &junctions);
                    let end = *chain.verts.last().unwrap();
                    (chain, end)
                };
                let on_path: HashSet<usize> = path.edges.iter().copied().collect();
                let via = adj[&junction]
                    .iter()
                    .find(|&&(e, _)| !on_path.contains(&e))
                    .unwrap()
                    .0;
                let circle = self.circle_chain(
                    &ordinary.iter().copied().filter(|e| !on_path.contains(e)).collect::<Vec<_>>(),
                    junction,
                    Some(via),
                );
                let mut edges = vec![h];
                let mut verts = vec![vh];
                edges.extend(&path.edges);
                verts.extend(&path.verts[1..]);
                edges.extend(&circle.edges);
                verts.extend(&circle.verts[1..]);
                let back = path.reversed();
                edges.extend(&back.edges);
                verts.extend(&back.verts[1..]);
                edges.push(h);
                let walk = Walk { edges, vertices: verts };
                Ok((CircuitKind::CircleHalfedge, walk))
            }
            2 => {
                let build = |ha: usize, hb: usize| -> Walk {
                    let a = self.edges[ha].endpoints()[0];
                    let b = self.edges[hb].endpoints()[0];
                    let mut edges = vec![ha];
                    let mut verts = vec![a];
                    if a != b {
                        let junctions = HashSet::from([b]);
                        let path = Self::follow_chain(&adj, a, adj[&a][0].0, &junctions);
                        edges.extend(&path.edges);
                        verts.extend(&path.verts[1..]);
                    }
                    edges.push(hb);
                    Walk { edges, vertices: verts }
                };
                let fwd = build(halfedges[0], halfedges[1]);
                if let Some(eps) = preferred {
                    let back = build(halfedges[1], halfedges[0]);
                    for w in [&fwd, &back] {
                        let signs = self.traversal_signs(w)?;
                        if let Some(k) = w.edges.iter().position(|&e| e == eps) {
                            if signs[k] == 1 {
                                return Ok((CircuitKind::HalfedgePair, w.clone()));
                            }
                        }
                    }
                }
                Ok((CircuitKind::HalfedgePair, fwd))
            }
            _ => Err(Error::Invalid("a circuit carries at most two halfedges".into())),
        }
    }

    /// Traverse a circle as a chain, given the start edge and the first
    /// vertex to cross to.
    fn walk_circle_from(
        &self,
        start: usize,
        via: usize,
        adj: &HashMap<usize, Vec<(usize, usize)>>,
        len: usize,
    ) -> Chain {
        let ends = self.edges[start].endpoints();
        let x0 = if ends[0] == via { ends[1] } else { ends[0] };
        let mut edges = vec![start];
        let mut verts = vec![x0, via];
        let mut prev = start;
        let mut cur = via;
        while edges.len() < len {
            let &(next, w) = adj[&cur].iter().find(|&&(e, _)| e != prev).unwrap();
            edges.push(next);
            verts.push(w);
            prev = next;
            cur = w;
        }
        Chain { edges, verts }
    }

    /// Put the circle containing the lowest edge first; each circle chain
    /// already starts and ends at its junction.
    fn order_circles(a: Chain, b: Chain) -> (Chain, Chain) {
        let min_a = a.edges.iter().min().copied();
        let min_b = b.edges.iter().min().copied();
        if min_a <= min_b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn concat(chains: Vec<Chain>) -> Chain {
        let mut edges = Vec::new();
        let mut verts: Vec<usize> = Vec::new();
        for c in chains {
            if c.edges.is_empty() {
                continue;
            }
            if verts.is_empty() {
                verts.extend(&c.verts);
            } else {
                assert_eq!(verts.last(), c.verts.first(), "chain junction mismatch");
                verts.extend(&c.verts[1..]);
            }
            edges.extend(&c.edges);
        }
        Chain { edges, verts }
    }

    fn chain_to_walk(c: Chain) -> Walk {
        let inner = c.verts[1..c.verts.len() - 1].to_vec();
        Walk { edges: c.edges, vertices: inner }
    }

    /// Rotate a closed walk so the preferred edge comes first; its first
    /// traversal then carries a plus sign by definition.
    fn rotate_to(&self, walk: &Walk, preferred: Option<usize>) -> Walk {
        let eps = match preferred {
            Some(e) => e,
            None => return walk.clone(),
        };
        let k = match walk.edges.iter().position(|&e| e == eps) {
            Some(k) if k > 0 => k,
            _ => return walk.clone(),
        };
        let len = walk.edges.len();
        // Full cyclic junction list: entry i sits after edge i, and the
        // last entry is the start vertex of the walk.
        let first = walk.edges[0];
        let ends = self.edges[first].endpoints();
        let x0 = if ends.len() == 2 && ends[0] == walk.vertices[0] {
            ends[1]
        } else {
            ends[0]
        };
        let mut cyc = walk.vertices.clone();
        cyc.push(x0);
        let edges: Vec<usize> = (0..len).map(|i| walk.edges[(k + i) % len]).collect();
        let vertices: Vec<usize> = (0..len - 1).map(|i| cyc[(k + i) % len]).collect();
        Walk { edges, vertices }
    }

    /// Sign of each step of the walk: the first edge is crossed with a
    /// plus, and consecutive edges flip against the product of their
    /// endpoint signs at the shared vertex.
    pub fn traversal_signs(&self, walk: &Walk) -> Result<Vec<i64>> {
        if walk.edges.is_empty() {
            return Err(Error::Invalid("empty walk".into()));
        }
        if walk.vertices.len() + 1 != walk.edges.len() {
            return Err(Error::Invalid("walk has mismatched edge and vertex counts".into()));
        }
        let mut signs = vec![1i64; walk.edges.len()];
        for i in 1..walk.edges.len() {
            let v = walk.vertices[i - 1];
            let t1 = self
                .tau(walk.edges[i - 1], v)
                .ok_or_else(|| Error::Invalid(format!("e{} misses vertex {v}", walk.edges[i - 1] + 1)))?;
            let t2 = self
                .tau(walk.edges[i], v)
                .ok_or_else(|| Error::Invalid(format!("e{} misses vertex {v}", walk.edges[i] + 1)))?;
            signs[i] = -t1.value() * t2.value() * signs[i - 1];
        }
        Ok(signs)
    }

    /// Sum of signed edge indicators over the walk; a kernel vector of the
    /// incidence matrix supported on the walk's circuit.
    pub fn walk_vector(&self, walk: &Walk) -> Result<Vec<BigInt>> {
        let signs = self.traversal_signs(walk)?;
        let mut out = vec![BigInt::zero(); self.edges.len()];
        for (i, &e) in walk.edges.iter().enumerate() {
            out[e] += signs[i];
        }
        Ok(out)
    }

    /// All circles (vertex-simple cycles, including digon pairs), each
    /// listed once with its sign.
    pub fn circles(&self, limit: usize) -> Result<Vec<Circle>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        // Digons: unordered pairs of parallel edges.
        for i in 0..self.edges.len() {
            if let Edge::Ordinary { u, v, .. } = self.edges[i] {
                let (a, b) = (u.min(v), u.max(v));
                for j in i + 1..self.edges.len() {
                    if let Edge::Ordinary { u: u2, v: v2, .. } = self.edges[j] {
                        if (u2.min(v2), u2.max(v2)) == (a, b) {
                            out.insert(vec![i, j]);
                        }
                    }
                }
            }
        }
        // Longer circles: paths of distinct vertices with the smallest
        // vertex first and direction fixed by the second vertex.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            if let Edge::Ordinary { u, v, .. } = *e {
                adj[u].push((i, v));
                adj[v].push((i, u));
            }
        }
        struct Search<'a> {
            adj: &'a [Vec<(usize, usize)>],
            out: &'a mut BTreeSet<Vec<usize>>,
            limit: usize,
            over: bool,
        }
        impl Search<'_> {
            fn explore(
                &mut self,
                start: usize,
                cur: usize,
                verts: &mut Vec<usize>,
                edges: &mut Vec<usize>,
            ) {
                if self.over {
                    return;
                }
                for &(ei, w) in &self.adj[cur] {
                    if w == start && verts.len() >= 3 {
                        if verts[1] < *verts.last().unwrap() {
                            let mut circle = edges.clone();
                            circle.push(ei);
                            circle.sort();
                            self.out.insert(circle);
                            if self.out.len() > self.limit {
                                self.over = true;
                                return;
                            }
                        }
                    } else if w > start && !verts.contains(&w) {
                        verts.push(w);
                        edges.push(ei);
                        self.explore(start, w, verts, edges);
                        verts.pop();
                        edges.pop();
                    }
                }
            }
        }
        let mut search = Search { adj: &adj, out: &mut out, limit, over: false };
        for start in 0..self.vertex_count {
            let mut verts = vec![start];
            let mut edges = vec![];
            search.explore(start, start, &mut verts, &mut edges);
        }
        if search.over || out.len() > limit {
            return Err(Error::Limit { required: out.len(), limit });
        }
        Ok(out
            .into_iter()
            .map(|edges| {
                let sign = self.circle_sign(&edges);
                Circle { edges, sign }
            })
            .collect())
    }

    /// Lexicographically first circle that is both negative and of odd
    /// length, if any.
    pub fn odd_negative_circle(&self, limit: usize) -> Result<Option<Circle>> {
        Ok(self
            .circles(limit)?
            .into_iter()
            .find(|c| c.sign == Sign::Minus && c.edges.len() % 2 == 1))
    }
}
