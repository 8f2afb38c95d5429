//! Signed posets: antisymmetric sets of type-B roots (+-chi_u +- chi_v and
//! +-chi_v) closed under nonnegative combinations within the root system.
//! A poset is presented through its extremal generators, which are the
//! incidence columns of a bidirected graph; the divisor theory of the
//! associated monomial ring is read off that graph. The class group comes
//! from a spanning count per connected piece, weights from the walk vectors
//! of fundamental circuits, the conic region from circuit walks, and the
//! Gorenstein property from walk balance together with circle parity.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Balance, BidirectedGraph, Edge, GraphCase, Sign, StructuralCircuit, Walk};
use crate::lp;
use crate::matrix::{self, IntMatrix};
use crate::matroid::VectorConfig;
use crate::toric::{self, ClassGroup, ConicPolytope, Facet, Mode, WeightSystem};

/// Type-B root: a coordinate vector with one or two nonzero entries, each
/// +-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Root {
    /// sign * chi_v.
    Short { v: usize, sign: Sign },
    /// su * chi_u + sv * chi_v with u < v.
    Long { u: usize, su: Sign, v: usize, sv: Sign },
}

impl Root {
    pub fn short(v: usize, sign: Sign) -> Root {
        Root::Short { v, sign }
    }

    /// Two-coordinate root; endpoints are stored in increasing order.
    pub fn long(u: usize, su: Sign, v: usize, sv: Sign) -> Result<Root> {
        if u == v {
            return Err(Error::Invalid("a long root needs two distinct coordinates".into()));
        }
        Ok(if u < v {
            Root::Long { u, su, v, sv }
        } else {
            Root::Long { u: v, su: sv, v: u, sv: su }
        })
    }

    pub fn from_vector(coords: &[BigInt]) -> Result<Root> {
        let mut support: Vec<(usize, Sign)> = Vec::new();
        for (i, x) in coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let sign = if x.is_one() {
                Sign::Plus
            } else if (-x).is_one() {
                Sign::Minus
            } else {
                return Err(Error::Invalid(format!(
                    "coordinate {} of a root must be 0 or +-1",
                    i + 1
                )));
            };
            support.push((i, sign));
        }
        match support.as_slice() {
            [(v, s)] => Ok(Root::short(*v, *s)),
            [(u, su), (v, sv)] => Root::long(*u, *su, *v, *sv),
            _ => Err(Error::Invalid("a root has one or two nonzero coordinates".into())),
        }
    }

    pub fn to_vector(&self, dim: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); dim];
        match *self {
            Root::Short { v, sign } => out[v] = BigInt::from(sign.value()),
            Root::Long { u, su, v, sv } => {
                out[u] = BigInt::from(su.value());
                out[v] = BigInt::from(sv.value());
            }
        }
        out
    }

    pub fn negated(&self) -> Root {
        match *self {
            Root::Short { v, sign } => Root::Short { v, sign: sign.flip() },
            Root::Long { u, su, v, sv } => Root::Long { u, su: su.flip(), v, sv: sv.flip() },
        }
    }

    pub fn max_vertex(&self) -> usize {
        match *self {
            Root::Short { v, .. } => v,
            Root::Long { v, .. } => v,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn lead(f: &mut fmt::Formatter<'_>, sign: Sign, v: usize) -> fmt::Result {
            match sign {
                Sign::Plus => write!(f, "x{}", v + 1),
                Sign::Minus => write!(f, "-x{}", v + 1),
            }
        }
        match *self {
            Root::Short { v, sign } => lead(f, sign, v),
            Root::Long { u, su, v, sv } => {
                lead(f, su, u)?;
                match sv {
                    Sign::Plus => write!(f, "+x{}", v + 1),
                    Sign::Minus => write!(f, "-x{}", v + 1),
                }
            }
        }
    }
}

/// All 2 d^2 roots of the rank-d type-B system in a fixed order: short
/// roots by coordinate then sign, long roots by endpoint pair then signs.
pub fn type_b_roots(dim: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(2 * dim * dim);
    let signs = [Sign::Plus, Sign::Minus];
    for v in 0..dim {
        for &s in &signs {
            out.push(Root::short(v, s));
        }
    }
    for u in 0..dim {
        for v in u + 1..dim {
            for &su in &signs {
                for &sv in &signs {
                    out.push(Root::Long { u, su, v, sv });
                }
            }
        }
    }
    out
}

fn edge_of_root(root: &Root) -> Edge {
    match *root {
        Root::Short { v, sign } => Edge::Halfedge { v, tau: sign },
        Root::Long { u, su, v, sv } => Edge::Ordinary { u, v, tau_u: su, tau_v: sv },
    }
}

fn root_of_edge(edge: &Edge) -> Result<Root> {
    match *edge {
        Edge::Halfedge { v, tau } => Ok(Root::short(v, tau)),
        Edge::Ordinary { u, v, tau_u, tau_v } => Root::long(u, tau_u, v, tau_v),
    }
}

/// Bidirected graph whose incidence columns are the given roots, in order.
pub fn graph_from_roots(dim: usize, roots: &[Root]) -> Result<BidirectedGraph> {
    BidirectedGraph::new(dim, roots.iter().map(edge_of_root).collect())
}

/// Interpret every column of a configuration as a root.
pub fn roots_from_config(config: &VectorConfig) -> Result<Vec<Root>> {
    (0..config.len()).map(|i| Root::from_vector(config.vector(i))).collect()
}

/// Bidirected graph of a configuration of root columns; its incidence
/// matrix reproduces the configuration column for column.
pub fn hasse_from_config(config: &VectorConfig) -> Result<BidirectedGraph> {
    graph_from_roots(config.dim(), &roots_from_config(config)?)
}

/// Finite antisymmetric list of type-B roots in a fixed order. The list
/// may be a bare generating set; `validate` additionally requires closure
/// under nonnegative combinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPoset {
    dim: usize,
    roots: Vec<Root>,
}

impl SignedPoset {
    pub fn new(dim: usize, roots: Vec<Root>) -> Result<SignedPoset> {
        if dim == 0 {
            return Err(Error::Invalid("the ambient dimension must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for root in &roots {
            if root.max_vertex() >= dim {
                return Err(Error::Invalid(format!(
                    "root {root} uses a coordinate past dimension {dim}"
                )));
            }
            if !seen.insert(*root) {
                return Err(Error::Invalid(format!("root {root} is listed twice")));
            }
        }
        for root in &roots {
            if seen.contains(&root.negated()) {
                return Err(Error::Invalid(format!(
                    "roots {} and {} violate antisymmetry",
                    root,
                    root.negated()
                )));
            }
        }
        Ok(SignedPoset { dim, roots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root_vectors(&self) -> Vec<Vec<BigInt>> {
        self.roots.iter().map(|r| r.to_vector(self.dim)).collect()
    }

    /// Every root of the ambient system lying in the cone generated by
    /// this list, as a new poset in enumeration order. Errors when that
    /// cone contains a root together with its negative.
    pub fn positive_linear_closure(&self) -> Result<SignedPoset> {
        let generators = self.root_vectors();
        let mut closure = Vec::new();
        for candidate in type_b_roots(self.dim) {
            let target = candidate.to_vector(self.dim);
            if lp::cone_membership(&generators, &target).is_some() {
                closure.push(candidate);
            }
        }
        let set: BTreeSet<Root> = closure.iter().copied().collect();
        for root in &closure {
            if set.contains(&root.negated()) {
                return Err(Error::Invalid(format!(
                    "closure contains both {} and {}: the generated cone is not pointed",
                    root,
                    root.negated()
                )));
            }
        }
        SignedPoset::new(self.dim, closure)
    }

    /// Closure check: every root in the generated cone must be listed.
    pub fn validate(&self) -> Result<()> {
        let closure = self.positive_linear_closure()?;
        let own: BTreeSet<Root> = self.roots.iter().copied().collect();
        let missing: Vec<String> =
            closure.roots.iter().filter(|r| !own.contains(r)).map(|r| r.to_string()).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "not closed under nonnegative combinations; missing {}",
                missing.join(", ")
            )))
        }
    }

    /// Indices of roots generating extremal rays: root i is kept iff it is
    /// not a nonnegative combination of the others.
    pub fn extremal_indices(&self) -> Vec<usize> {
        let vectors = self.root_vectors();
        let mut keep = Vec::new();
        for i in 0..vectors.len() {
            let others: Vec<Vec<BigInt>> = vectors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if lp::cone_membership(&others, &vectors[i]).is_none() {
                keep.push(i);
            }
        }
        keep
    }

    /// The irredundant generators as a vector configuration, in root-list
    /// order. Errors when the generated cone is not pointed.
    pub fn extremal_generators(&self) -> Result<VectorConfig> {
        let keep = self.extremal_indices();
        let vectors = self.root_vectors();
        VectorConfig::new(self.dim, keep.iter().map(|&i| vectors[i].clone()).collect())
    }

    /// Bidirected graph on the irredundant generators, in root-list order.
    pub fn hasse(&self) -> Result<BidirectedGraph> {
        let keep = self.extremal_indices();
        let roots: Vec<Root> = keep.iter().map(|&i| self.roots[i]).collect();
        graph_from_roots(self.dim, &roots)
    }

    /// Divisor class group: free rank counted per connected piece (extra
    /// edges over a spanning tree, one less when a halfedge or a negative
    /// circle is present) with a two-torsion summand for each piece that is
    /// unbalanced without halfedges. Cross-checked against the elementary
    /// divisors of the incidence matrix.
    pub fn class_group(&self) -> Result<ClassGroup> {
        let graph = self.hasse()?;
        let config = graph.config()?;
        let mut free_rank = 0usize;
        let mut torsion = Vec::new();
        for comp in graph.components() {
            let (sub, _) = graph.subgraph(&comp);
            if sub.edge_count() == 0 {
                continue;
            }
            let case = classify_case(&sub)?;
            let e = sub.edge_count();
            let d = sub.vertex_count();
            match case {
                GraphCase::Balanced => free_rank += e + 1 - d,
                GraphCase::WithHalfedge => free_rank += e - d,
                GraphCase::Unbalanced => {
                    free_rank += e - d;
                    torsion.push(BigInt::from(2));
                }
            }
        }
        let by_count = ClassGroup { free_rank, torsion };
        let by_divisors = toric::class_group(&config);
        if by_count != by_divisors {
            return Err(Error::Invalid(format!(
                "class group mismatch: spanning count gives {}, elementary divisors give {}",
                by_count.describe(),
                by_divisors.describe()
            )));
        }
        Ok(by_count)
    }

    /// Weights of the irredundant generators relative to a maximal
    /// independent edge set (`forest`), a basis order on the remaining
    /// edges (`epsilons`), and optionally explicit closed walks through the
    /// fundamental circuits. Requires a connected diagram.
    pub fn weights(
        &self,
        forest: Option<&[usize]>,
        epsilons: Option<&[usize]>,
        walks: Option<&[Walk]>,
    ) -> Result<SignedWeights> {
        let graph = self.hasse()?;
        weights_for_graph(&graph, forest, epsilons, walks)
    }

    /// Conic region of the weights; shorthand for `weights` + `conic_region`.
    pub fn conic_region(
        &self,
        forest: Option<&[usize]>,
        epsilons: Option<&[usize]>,
        limit: usize,
    ) -> Result<ConicPolytope> {
        self.weights(forest, epsilons, None)?.conic_region(limit)
    }

    /// Gorenstein classification from circuit walks: the ring is
    /// quasi-Gorenstein up to torsion iff every circuit walk meets as many
    /// forward as backward steps, and Gorenstein iff additionally no odd
    /// negative circle exists. Witnesses report the failing circuit or
    /// circle.
    pub fn gorenstein(&self, limit: usize) -> Result<GorensteinStatus> {
        let graph = self.hasse()?;
        gorenstein_for_graph(&graph, limit)
    }

    /// Independent Gorenstein route through the canonical class: sum of all
    /// weights per connected piece, computed with the default forest.
    pub fn gorenstein_from_weights(&self) -> Result<GorensteinVerdict> {
        let graph = self.hasse()?;
        let mut all_gorenstein = true;
        for comp in graph.components() {
            let (sub, _) = graph.subgraph(&comp);
            if sub.edge_count() == 0 {
                continue;
            }
            let weights = weights_for_graph(&sub, None, None, None)?;
            let (free, bit) = weights.canonical();
            if free.iter().any(|x| !x.is_zero()) {
                return Ok(GorensteinVerdict::Neither);
            }
            if bit != 0 {
                all_gorenstein = false;
            }
        }
        Ok(if all_gorenstein {
            GorensteinVerdict::Gorenstein
        } else {
            GorensteinVerdict::QGorensteinOnly
        })
    }

    /// Split into connected pieces of the diagram, each relabeled to its
    /// own vertex range, with maps back to the original vertices and to the
    /// irredundant generator list.
    pub fn decompose(&self) -> Result<Vec<PosetComponent>> {
        let graph = self.hasse()?;
        let mut out = Vec::new();
        for comp in graph.components() {
            let (sub, edge_map) = graph.subgraph(&comp);
            let roots: Vec<Root> =
                sub.edges().iter().map(root_of_edge).collect::<Result<_>>()?;
            let poset = SignedPoset::new(sub.vertex_count(), roots)?;
            out.push(PosetComponent { poset, vertex_map: comp, edge_map });
        }
        Ok(out)
    }
}

/// One connected piece of a poset's diagram.
#[derive(Debug, Clone)]
pub struct PosetComponent {
    pub poset: SignedPoset,
    /// Component vertex -> original vertex.
    pub vertex_map: Vec<usize>,
    /// Component edge -> index into the original irredundant generators.
    pub edge_map: Vec<usize>,
}

/// The poset of a simple graph: one root chi_u + chi_v per edge, giving
/// the all-entering bidirection on the graph.
pub fn graph_poset(vertex_count: usize, edges: &[(usize, usize)]) -> Result<SignedPoset> {
    let mut roots = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        roots.push(Root::long(u, Sign::Plus, v, Sign::Plus)?);
    }
    SignedPoset::new(vertex_count, roots)
}

/// Shape of a connected diagram: a halfedge forces the middle case, a
/// negative circle without halfedges the last, otherwise balanced.
pub fn classify_case(graph: &BidirectedGraph) -> Result<GraphCase> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if !graph.halfedge_indices().is_empty() {
        return Ok(GraphCase::WithHalfedge);
    }
    match graph.balance() {
        Balance::Balanced { .. } => Ok(GraphCase::Balanced),
        Balance::Unbalanced { .. } => Ok(GraphCase::Unbalanced),
    }
}

/// A maximal independent edge set together with the basis order on the
/// remaining edges and their fundamental circuits.
#[derive(Debug, Clone)]
pub struct FundamentalSystem {
    pub graph: BidirectedGraph,
    pub case: GraphCase,
    /// Chosen maximal independent edge set, sorted.
    pub forest: Vec<usize>,
    /// Edges of the unique circle inside the forest (unbalanced case only).
    pub negative_circle: Vec<usize>,
    /// Non-forest edges in basis order.
    pub epsilons: Vec<usize>,
    /// Fundamental circuit of each basis edge, with its canonical walk.
    pub circuits: Vec<StructuralCircuit>,
}

fn spans_connected(graph: &BidirectedGraph, forest: &[usize]) -> bool {
    let d = graph.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); d];
    for &e in forest {
        if let Edge::Ordinary { u, v, .. } = *graph.edge(e) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

fn validate_forest(graph: &BidirectedGraph, case: GraphCase, forest: &[usize]) -> Result<()> {
    let n = graph.edge_count();
    for &e in forest {
        if e >= n {
            return Err(Error::Invalid(format!("forest edge {} is out of range", e + 1)));
        }
    }
    for pair in forest.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::Invalid("the forest lists an edge twice".into()));
        }
    }
    if !graph.is_pseudo_forest(forest) {
        return Err(Error::Invalid("the chosen edge set is dependent".into()));
    }
    let d = graph.vertex_count();
    let halfedges = forest.iter().filter(|&&e| graph.edge(e).is_halfedge()).count();
    let (want_len, want_half, shape) = match case {
        GraphCase::Balanced => (d - 1, 0usize, "a spanning tree"),
        GraphCase::WithHalfedge => (d, 1, "a spanning tree plus one halfedge"),
        GraphCase::Unbalanced => {
            (d, 0, "a connected spanning subgraph closing one negative circle")
        }
    };
    if forest.len() != want_len || halfedges != want_half || !spans_connected(graph, forest) {
        return Err(Error::Invalid(format!("the forest here must be {shape}")));
    }
    Ok(())
}

/// Edges of the unique circle inside an independent spanning set, found by
/// peeling leaves.
fn circle_inside(graph: &BidirectedGraph, forest: &[usize]) -> Vec<usize> {
    let mut active: BTreeSet<usize> =
        forest.iter().copied().filter(|&e| !graph.edge(e).is_halfedge()).collect();
    loop {
        let mut incident: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::new();
        for &e in &active {
            for v in graph.edge(e).endpoints() {
                incident.entry(v).or_default().push(e);
            }
        }
        let leaves: Vec<usize> = incident
            .values()
            .filter(|edges| edges.len() == 1)
            .map(|edges| edges[0])
            .collect();
        if leaves.is_empty() {
            break;
        }
        for e in leaves {
            active.remove(&e);
        }
    }
    active.into_iter().collect()
}

/// Build the fundamental system of a connected diagram. A `None` forest
/// falls back to the deterministic spanning structure; explicit choices
/// are validated against the case shape. A `None` basis order lists the
/// non-forest edges in increasing index order.
pub fn fundamental_system(
    graph: &BidirectedGraph,
    forest: Option<&[usize]>,
    epsilons: Option<&[usize]>,
) -> Result<FundamentalSystem> {
    let case = classify_case(graph)?;
    let forest: Vec<usize> = match forest {
        Some(given) => {
            let mut sorted = given.to_vec();
            sorted.sort_unstable();
            validate_forest(graph, case, &sorted)?;
            sorted
        }
        None => {
            let (_, mut chosen) = graph.spanning_structure()?;
            chosen.sort_unstable();
            chosen
        }
    };
    let negative_circle = if case == GraphCase::Unbalanced {
        circle_inside(graph, &forest)
    } else {
        Vec::new()
    };
    let complement: Vec<usize> =
        (0..graph.edge_count()).filter(|e| !forest.contains(e)).collect();
    let epsilons: Vec<usize> = match epsilons {
        Some(order) => {
            let given: BTreeSet<usize> = order.iter().copied().collect();
            let expected: BTreeSet<usize> = complement.iter().copied().collect();
            if given != expected || order.len() != given.len() {
                return Err(Error::Invalid(
                    "the basis order must list each non-forest edge exactly once".into(),
                ));
            }
            order.to_vec()
        }
        None => complement,
    };
    let mut circuits = Vec::with_capacity(epsilons.len());
    for &eps in &epsilons {
        let support = graph.fundamental_circuit(&forest, eps)?;
        circuits.push(graph.circuit_from_support(&support, Some(eps))?);
    }
    Ok(FundamentalSystem {
        graph: graph.clone(),
        case,
        forest,
        negative_circle,
        epsilons,
        circuits,
    })
}

/// Weights of a connected diagram: free parts are the rows of the kernel
/// matrix whose columns are the fundamental walk vectors, and the
/// two-torsion residue marks membership in the forest's negative circle.
#[derive(Debug, Clone)]
pub struct SignedWeights {
    pub config: VectorConfig,
    pub system: FundamentalSystem,
    pub weights: WeightSystem,
    /// Two-torsion residue of each edge weight (all zero unless the
    /// diagram is unbalanced without halfedges).
    pub torsion_bits: Vec<u8>,
}

fn validate_walk_column(
    graph: &BidirectedGraph,
    circuit: &StructuralCircuit,
    eps: usize,
    walk: &Walk,
) -> Result<Vec<BigInt>> {
    let vector = graph.walk_vector(walk)?;
    let walked: BTreeSet<usize> = walk.edges.iter().copied().collect();
    let expected: BTreeSet<usize> = circuit.support.iter().copied().collect();
    if walked != expected {
        return Err(Error::Invalid(
            "a supplied walk does not traverse its fundamental circuit".into(),
        ));
    }
    let negated: Vec<BigInt> = circuit.vector.iter().map(|x| -x).collect();
    if vector != circuit.vector && vector != negated {
        return Err(Error::Invalid(
            "a supplied walk is not a closed walk of its circuit".into(),
        ));
    }
    if vector[eps].abs() != BigInt::one() {
        return Err(Error::Invalid(
            "a basis edge must be stepped through exactly once by its walk".into(),
        ));
    }
    Ok(vector)
}

/// Weights for a connected diagram; see `SignedPoset::weights`.
pub fn weights_for_graph(
    graph: &BidirectedGraph,
    forest: Option<&[usize]>,
    epsilons: Option<&[usize]>,
    walks: Option<&[Walk]>,
) -> Result<SignedWeights> {
    let system = fundamental_system(graph, forest, epsilons)?;
    let config = graph.config()?;
    let n = graph.edge_count();
    let t = system.epsilons.len();
    if let Some(list) = walks {
        if list.len() != t {
            return Err(Error::Invalid(format!("expected {} walks, got {}", t, list.len())));
        }
    }
    let mut kernel = IntMatrix::zero(n, t);
    for (i, circuit) in system.circuits.iter().enumerate() {
        let column = match walks {
            Some(list) => validate_walk_column(graph, circuit, system.epsilons[i], &list[i])?,
            None => circuit.vector.clone(),
        };
        for (e, value) in column.into_iter().enumerate() {
            kernel.set(e, i, value);
        }
    }
    let weights = toric::weight_system(&config, Some(kernel))?;
    let mut torsion_bits = vec![0u8; n];
    if system.case == GraphCase::Unbalanced {
        for &e in &system.negative_circle {
            torsion_bits[e] = 1;
        }
    }
    Ok(SignedWeights { config, system, weights, torsion_bits })
}

impl SignedWeights {
    pub fn ambient_dim(&self) -> usize {
        self.system.epsilons.len()
    }

    /// Free part of the weight of edge e.
    pub fn free(&self, e: usize) -> Vec<BigInt> {
        self.weights.free_weight(e)
    }

    /// Two-torsion residue of the weight of edge e.
    pub fn bit(&self, e: usize) -> u8 {
        self.torsion_bits[e]
    }

    /// Target group of the weight map.
    pub fn class_group(&self) -> ClassGroup {
        let torsion = if self.system.case == GraphCase::Unbalanced {
            vec![BigInt::from(2)]
        } else {
            Vec::new()
        };
        ClassGroup { free_rank: self.ambient_dim(), torsion }
    }

    /// Sum of all edge weights; the class of the canonical module.
    pub fn canonical(&self) -> (Vec<BigInt>, u8) {
        let t = self.ambient_dim();
        let mut free = vec![BigInt::zero(); t];
        let mut bit = 0u8;
        for e in 0..self.config.len() {
            let row = self.weights.free_weight(e);
            for (i, x) in row.into_iter().enumerate() {
                free[i] += x;
            }
            bit ^= self.torsion_bits[e];
        }
        (free, bit)
    }

    /// Certify that the weights present the class group: the map kills the
    /// row space of the incidence matrix (free parts and residues), the
    /// weight images generate the target, and the target agrees with the
    /// elementary-divisor description.
    pub fn verify_exact_sequence(&self) -> Result<()> {
        let a = self.config.matrix();
        let n = self.config.len();
        if !a.mul(&self.weights.kernel).is_zero() {
            return Err(Error::Invalid("free weights do not kill the row space".into()));
        }
        let two = BigInt::from(2);
        for u in 0..a.rows() {
            let row = a.row(u);
            let parity: BigInt =
                row.iter().zip(&self.torsion_bits).map(|(x, &b)| x * BigInt::from(b)).sum();
            if !parity.mod_floor(&two).is_zero() {
                return Err(Error::Invalid(
                    "torsion residues do not kill the row space".into(),
                ));
            }
        }
        let t = self.ambient_dim();
        let torsion = self.system.case == GraphCase::Unbalanced;
        let rows = t + usize::from(torsion);
        let cols = n + usize::from(torsion);
        let mut stacked = IntMatrix::zero(rows, cols);
        for e in 0..n {
            for i in 0..t {
                stacked.set(i, e, self.weights.kernel.get(e, i).clone());
            }
            if torsion {
                stacked.set(t, e, BigInt::from(self.torsion_bits[e]));
            }
        }
        if torsion {
            stacked.set(t, n, two);
        }
        let snf = matrix::smith_normal_form(&stacked);
        if snf.rank() != rows || !snf.diagonal[..rows].iter().all(|x| x.is_one()) {
            return Err(Error::Invalid("weights do not generate the class group".into()));
        }
        let by_divisors = toric::class_group(&self.config);
        if self.class_group() != by_divisors {
            return Err(Error::Invalid(format!(
                "weight target {} differs from elementary divisors {}",
                self.class_group().describe(),
                by_divisors.describe()
            )));
        }
        Ok(())
    }

    /// Conic region: one slab per circuit, with the bounds given by the
    /// numbers of forward and backward steps of the circuit walk and the
    /// functional read off the walk's steps through the basis edges.
    pub fn conic_region(&self, limit: usize) -> Result<ConicPolytope> {
        let t = self.ambient_dim();
        let circuits = self.system.graph.circuits(limit)?;
        let mut facets = Vec::with_capacity(circuits.len());
        for circuit in &circuits {
            let mut functional = vec![BigInt::zero(); t];
            for (i, &eps) in self.system.epsilons.iter().enumerate() {
                // The basis edge enters its own fundamental walk once with
                // sign kernel[eps][i]; other walks avoid it entirely.
                functional[i] = self.weights.kernel.get(eps, i) * &circuit.vector[eps];
            }
            let upper: BigInt =
                circuit.vector.iter().filter(|x| x.is_positive()).cloned().sum();
            let lower: BigInt =
                circuit.vector.iter().filter(|x| x.is_negative()).cloned().sum();
            facets.push(Facet {
                functional,
                lower,
                upper,
                circuit: circuit.support.clone(),
            });
        }
        Ok(ConicPolytope { ambient_dim: t, facets })
    }

    /// Number of conic classes: interior points of the region times the
    /// torsion order.
    pub fn conic_count(&self, limit: usize) -> Result<BigInt> {
        let region = self.conic_region(limit)?;
        let points = toric::lattice_points(&region, Mode::Open, 1)?;
        Ok(BigInt::from(points.len()) * self.class_group().torsion_order())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GorensteinVerdict {
    Gorenstein,
    QGorensteinOnly,
    Neither,
}

impl fmt::Display for GorensteinVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GorensteinVerdict::Gorenstein => "Gorenstein",
            GorensteinVerdict::QGorensteinOnly => "Q-Gorenstein but not Gorenstein",
            GorensteinVerdict::Neither => "not Q-Gorenstein",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GorensteinWitness {
    /// Circuit whose walk has unequal numbers of forward and backward
    /// steps (edge indices).
    ImbalancedCircuit(Vec<usize>),
    /// Negative circle of odd length (edge indices).
    OddNegativeCircle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinStatus {
    pub verdict: GorensteinVerdict,
    /// Present exactly when the verdict is not Gorenstein.
    pub witness: Option<GorensteinWitness>,
}

/// Gorenstein classification of a diagram, connected or not; witnesses are
/// reported in the original edge indexing.
pub fn gorenstein_for_graph(graph: &BidirectedGraph, limit: usize) -> Result<GorensteinStatus> {
    let pieces: Vec<(BidirectedGraph, Vec<usize>)> = graph
        .components()
        .into_iter()
        .map(|comp| graph.subgraph(&comp))
        .filter(|(sub, _)| sub.edge_count() > 0)
        .collect();
    for (sub, edge_map) in &pieces {
        for circuit in sub.circuits(limit)? {
            let total: BigInt = circuit.vector.iter().sum();
            if !total.is_zero() {
                let edges = circuit.support.iter().map(|&e| edge_map[e]).collect();
                return Ok(GorensteinStatus {
                    verdict: GorensteinVerdict::Neither,
                    witness: Some(GorensteinWitness::ImbalancedCircuit(edges)),
                });
            }
        }
    }
    for (sub, edge_map) in &pieces {
        if let Some(circle) = sub.odd_negative_circle(limit)? {
            let edges = circle.edges.iter().map(|&e| edge_map[e]).collect();
            return Ok(GorensteinStatus {
                verdict: GorensteinVerdict::QGorensteinOnly,
                witness: Some(GorensteinWitness::OddNegativeCircle(edges)),
            });
        }
    }
    Ok(GorensteinStatus { verdict: GorensteinVerdict::Gorenstein, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    fn rv(xs: &[i64]) -> Root {
        Root::from_vector(&ints(xs)).unwrap()
    }

    /// Square with a diagonal and two halfedges, all incidences entering.
    fn p1() -> SignedPoset {
        SignedPoset::new(
            4,
            vec![
                rv(&[1, 1, 0, 0]),
                rv(&[0, 1, 1, 0]),
                rv(&[0, 0, 1, 1]),
                rv(&[1, 0, 0, 1]),
                rv(&[0, 1, 0, 1]),
                rv(&[1, 0, 0, 0]),
                rv(&[0, 0, 1, 0]),
            ],
        )
        .unwrap()
    }

    /// Square with two parallel-edge pairs of mixed signs; unbalanced, no
    /// halfedges.
    fn p2() -> SignedPoset {
        SignedPoset::new(
            4,
            vec![
                rv(&[1, 1, 0, 0]),
                rv(&[0, 1, 1, 0]),
                rv(&[0, 0, 1, 1]),
                rv(&[1, 0, 0, 1]),
                rv(&[1, 0, 0, -1]),
                rv(&[0, -1, 1, 0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn root_round_trip_and_display() {
        let r = rv(&[0, -1, 1, 0]);
        assert_eq!(r, Root::long(2, Sign::Plus, 1, Sign::Minus).unwrap());
        assert_eq!(r.to_vector(4), ints(&[0, -1, 1, 0]));
        assert_eq!(r.to_string(), "-x2+x3");
        assert_eq!(rv(&[0, 0, -1]).to_string(), "-x3");
        assert_eq!(rv(&[1, 1]).to_string(), "x1+x2");
        assert!(Root::from_vector(&ints(&[2, 0])).is_err());
        assert!(Root::from_vector(&ints(&[1, 1, 1])).is_err());
        assert!(Root::from_vector(&ints(&[0, 0])).is_err());
        assert!(Root::long(1, Sign::Plus, 1, Sign::Minus).is_err());
        assert_eq!(type_b_roots(3).len(), 18);
    }

    #[test]
    fn constructor_rejects_bad_lists() {
        assert!(SignedPoset::new(2, vec![rv(&[1, 0]), rv(&[-1, 0])]).is_err());
        assert!(SignedPoset::new(2, vec![rv(&[1, 0]), rv(&[1, 0])]).is_err());
        assert!(SignedPoset::new(1, vec![Root::short(1, Sign::Plus)]).is_err());
        assert!(SignedPoset::new(0, vec![]).is_err());
    }

    #[test]
    fn closure_adds_forced_roots() {
        let chain = SignedPoset::new(3, vec![rv(&[1, -1, 0]), rv(&[0, 1, -1])]).unwrap();
        let closed = chain.positive_linear_closure().unwrap();
        assert!(closed.roots().contains(&rv(&[1, 0, -1])));
        assert_eq!(closed.len(), 3);
        assert!(chain.validate().is_err());
        assert!(closed.validate().is_ok());

        let wedge = SignedPoset::new(2, vec![rv(&[1, 1]), rv(&[1, -1])]).unwrap();
        let closed = wedge.positive_linear_closure().unwrap();
        assert!(closed.roots().contains(&rv(&[1, 0])));
        assert_eq!(closed.len(), 3);

        let single = SignedPoset::new(2, vec![rv(&[1, 0])]).unwrap();
        assert_eq!(single.positive_linear_closure().unwrap().roots(), single.roots());
        assert!(single.validate().is_ok());

        let line = SignedPoset::new(2, vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[-1, -1])]).unwrap();
        assert!(line.positive_linear_closure().is_err());
    }

    #[test]
    fn six_generator_example_closure_extremal_incidence() {
        let roots = vec![
            rv(&[1, 0, 0, 0]),
            rv(&[-1, 1, 0, 0]),
            rv(&[0, 1, 1, 0]),
            rv(&[0, 1, -1, 0]),
            rv(&[0, 0, -1, -1]),
            rv(&[1, 0, 0, -1]),
        ];
        let p = SignedPoset::new(4, roots.clone()).unwrap();
        let closed = p.positive_linear_closure().unwrap();
        assert!(closed.validate().is_ok());
        assert!(closed.len() > 6);
        let config = closed.extremal_generators().unwrap();
        let got: BTreeSet<Vec<BigInt>> =
            (0..config.len()).map(|i| config.vector(i).to_vec()).collect();
        let expect: BTreeSet<Vec<BigInt>> = roots.iter().map(|r| r.to_vector(4)).collect();
        assert_eq!(got, expect);

        let graph = p.hasse().unwrap();
        let printed = IntMatrix::from_i64(&[
            &[1, -1, 0, 0, 0, 1],
            &[0, 1, 1, 1, 0, 0],
            &[0, 0, 1, -1, -1, 0],
            &[0, 0, 0, 0, -1, -1],
        ]);
        assert_eq!(graph.incidence_matrix(), printed);
    }

    #[test]
    fn extremal_drops_interior_roots() {
        let p = SignedPoset::new(2, vec![rv(&[1, 1]), rv(&[1, -1]), rv(&[1, 0])]).unwrap();
        assert_eq!(p.extremal_indices(), vec![0, 1]);
        let config = p.extremal_generators().unwrap();
        assert_eq!(config.len(), 2);
    }

    #[test]
    fn hasse_round_trips_the_configuration() {
        let config = p2().extremal_generators().unwrap();
        let graph = hasse_from_config(&config).unwrap();
        assert_eq!(graph.incidence_matrix(), config.matrix());
    }

    #[test]
    fn classify_cases() {
        assert_eq!(classify_case(&p1().hasse().unwrap()).unwrap(), GraphCase::WithHalfedge);
        assert_eq!(classify_case(&p2().hasse().unwrap()).unwrap(), GraphCase::Unbalanced);
        let c4 = graph_poset(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(classify_case(&c4.hasse().unwrap()).unwrap(), GraphCase::Balanced);
        let k3 = graph_poset(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(classify_case(&k3.hasse().unwrap()).unwrap(), GraphCase::Unbalanced);
        let split = SignedPoset::new(4, vec![rv(&[1, 1, 0, 0]), rv(&[0, 0, 1, 1])]).unwrap();
        assert!(matches!(classify_case(&split.hasse().unwrap()), Err(Error::Disconnected)));
    }

    #[test]
    fn class_group_goldens() {
        assert_eq!(p1().class_group().unwrap(), ClassGroup { free_rank: 3, torsion: vec![] });
        assert_eq!(
            p2().class_group().unwrap(),
            ClassGroup { free_rank: 2, torsion: vec![bi(2)] }
        );
        let tree = SignedPoset::new(3, vec![rv(&[1, 1, 0]), rv(&[0, 1, -1])]).unwrap();
        assert_eq!(tree.class_group().unwrap(), ClassGroup { free_rank: 0, torsion: vec![] });
        let k3 = graph_poset(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            k3.class_group().unwrap(),
            ClassGroup { free_rank: 0, torsion: vec![bi(2)] }
        );
    }

    #[test]
    fn halfedge_square_weights_golden() {
        let w = p1().weights(Some(&[0, 2, 3, 6]), Some(&[5, 1, 4]), None).unwrap();
        assert_eq!(w.system.case, GraphCase::WithHalfedge);
        assert!(w.system.negative_circle.is_empty());
        let expected: [[i64; 3]; 7] = [
            [0, -1, -1],
            [0, 1, 0],
            [1, -1, -2],
            [-1, 1, 1],
            [0, 0, 1],
            [1, 0, 0],
            [-1, 0, 2],
        ];
        for (e, row) in expected.iter().enumerate() {
            assert_eq!(w.free(e), ints(row), "weight of edge {}", e + 1);
            assert_eq!(w.bit(e), 0);
        }
        let (canonical, bit) = w.canonical();
        assert_eq!(canonical, ints(&[0, 0, 1]));
        assert_eq!(bit, 0);
        w.verify_exact_sequence().unwrap();
    }

    #[test]
    fn mixed_sign_square_weights_golden() {
        let w = p2().weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), None).unwrap();
        assert_eq!(w.system.case, GraphCase::Unbalanced);
        assert_eq!(w.system.negative_circle, vec![0, 1, 2, 4]);
        let expected: [[i64; 2]; 6] = [[-1, 1], [1, 0], [-1, -1], [1, 0], [0, -1], [0, 1]];
        let bits: [u8; 6] = [1, 1, 1, 0, 1, 0];
        for e in 0..6 {
            assert_eq!(w.free(e), ints(&expected[e]), "weight of edge {}", e + 1);
            assert_eq!(w.bit(e), bits[e], "residue of edge {}", e + 1);
        }
        assert_eq!(
            w.class_group(),
            ClassGroup { free_rank: 2, torsion: vec![bi(2)] }
        );
        let (canonical, bit) = w.canonical();
        assert_eq!(canonical, ints(&[0, 0]));
        assert_eq!(bit, 0);
        w.verify_exact_sequence().unwrap();
    }

    #[test]
    fn default_choices_stay_exact() {
        for p in [p1(), p2()] {
            let w = p.weights(None, None, None).unwrap();
            w.verify_exact_sequence().unwrap();
            for (i, &eps) in w.system.epsilons.iter().enumerate() {
                let row = w.free(eps);
                for (j, x) in row.iter().enumerate() {
                    if j == i {
                        assert_eq!(x.abs(), BigInt::one());
                    } else {
                        assert!(x.is_zero());
                    }
                }
                assert_eq!(w.bit(eps), 0);
            }
        }
    }

    #[test]
    fn alternative_forest_stays_exact() {
        let w = p2().weights(Some(&[0, 1, 2, 5]), None, None).unwrap();
        assert_eq!(w.system.case, GraphCase::Unbalanced);
        assert_eq!(w.system.negative_circle, vec![1, 5]);
        assert_eq!(w.system.epsilons, vec![3, 4]);
        let (canonical, bit) = w.canonical();
        assert_eq!(canonical, ints(&[0, 0]));
        assert_eq!(bit, 0);
        w.verify_exact_sequence().unwrap();
    }

    #[test]
    fn forest_validation_rejects_bad_shapes() {
        let p = p2();
        // positive square: dependent
        assert!(p.weights(Some(&[0, 1, 2, 3]), None, None).is_err());
        // too small for the unbalanced case
        assert!(p.weights(Some(&[0, 1, 2]), None, None).is_err());
        // wrong size and not spanning
        assert!(p.weights(Some(&[0, 1, 5]), None, None).is_err());
        let q = p1();
        // two halfedges
        assert!(q.weights(Some(&[0, 1, 2, 5, 6]), None, None).is_err());
        // independent negative-circle set, but this diagram needs a
        // halfedge in its forest
        assert!(q.weights(Some(&[0, 1, 2, 4]), None, None).is_err());
        // out of range / duplicates
        assert!(q.weights(Some(&[0, 2, 3, 9]), None, None).is_err());
        assert!(q.weights(Some(&[0, 2, 3, 3]), None, None).is_err());
    }

    #[test]
    fn epsilon_order_is_validated() {
        let p = p1();
        assert!(p.weights(Some(&[0, 2, 3, 6]), Some(&[5, 1]), None).is_err());
        assert!(p.weights(Some(&[0, 2, 3, 6]), Some(&[5, 1, 1]), None).is_err());
        assert!(p.weights(Some(&[0, 2, 3, 6]), Some(&[5, 1, 3]), None).is_err());
    }

    #[test]
    fn explicit_walks_reproduce_and_flip() {
        let p = p2();
        let walks = vec![
            Walk { edges: vec![3, 0, 1, 2], vertices: vec![0, 1, 2] },
            Walk { edges: vec![5, 2, 4, 0], vertices: vec![2, 3, 0] },
        ];
        let w = p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&walks)).unwrap();
        let expected: [[i64; 2]; 6] = [[-1, 1], [1, 0], [-1, -1], [1, 0], [0, -1], [0, 1]];
        for (e, row) in expected.iter().enumerate() {
            assert_eq!(w.free(e), ints(row));
        }

        // Starting the first walk elsewhere flips the first coordinate.
        let rotated = vec![
            Walk { edges: vec![0, 1, 2, 3], vertices: vec![1, 2, 3] },
            Walk { edges: vec![5, 2, 4, 0], vertices: vec![2, 3, 0] },
        ];
        let w2 = p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&rotated)).unwrap();
        w2.verify_exact_sequence().unwrap();
        assert_eq!(w2.free(3), ints(&[-1, 0]));
        assert_eq!(w2.free(0), ints(&[1, 1]));

        // Wrong circuit, wrong count, and broken vertex sequences are
        // rejected.
        let wrong = vec![walks[0].clone(), walks[0].clone()];
        assert!(p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&wrong)).is_err());
        assert!(p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&walks[..1])).is_err());
        let broken = vec![
            Walk { edges: vec![3, 0, 1, 2], vertices: vec![0, 0, 2] },
            walks[1].clone(),
        ];
        assert!(p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&broken)).is_err());
    }

    #[test]
    fn mixed_sign_square_conic_golden() {
        let w = p2().weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), None).unwrap();
        let region = w.conic_region(20).unwrap();
        assert_eq!(region.facets.len(), 4);
        let reduced = region.reduced();
        let got: BTreeSet<(Vec<BigInt>, BigInt, BigInt)> = reduced
            .facets
            .iter()
            .map(|f| (f.functional.clone(), f.lower.clone(), f.upper.clone()))
            .collect();
        let expect: BTreeSet<(Vec<BigInt>, BigInt, BigInt)> = [
            (ints(&[1, 0]), bi(-2), bi(2)),
            (ints(&[0, 1]), bi(-2), bi(2)),
            (ints(&[1, -1]), bi(-3), bi(3)),
            (ints(&[1, 1]), bi(-3), bi(3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expect);
        assert_eq!(toric::lattice_points(&reduced, Mode::Open, 1).unwrap().len(), 9);
        assert_eq!(w.conic_count(20).unwrap(), bi(18));
        assert_eq!(toric::conic_count_formula(&w.config, 20).unwrap(), bi(18));
    }

    #[test]
    fn walk_route_matches_kernel_route() {
        let w = p1().weights(Some(&[0, 2, 3, 6]), Some(&[5, 1, 4]), None).unwrap();
        let signed = w.conic_region(20).unwrap().reduced();
        let generic = toric::conic_polytope(&w.config, &w.weights, 20).unwrap().reduced();
        let key = |p: &ConicPolytope| -> BTreeSet<(Vec<BigInt>, BigInt, BigInt)> {
            p.facets
                .iter()
                .map(|f| (f.functional.clone(), f.lower.clone(), f.upper.clone()))
                .collect()
        };
        assert_eq!(key(&signed), key(&generic));
        assert_eq!(
            toric::lattice_points(&signed, Mode::Open, 1).unwrap(),
            toric::lattice_points(&generic, Mode::Open, 1).unwrap()
        );
        assert_eq!(
            w.conic_count(20).unwrap(),
            toric::conic_count_formula(&w.config, 20).unwrap()
        );
    }

    #[test]
    fn gorenstein_goldens() {
        let k3 = graph_poset(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let status = k3.gorenstein(20).unwrap();
        assert_eq!(status.verdict, GorensteinVerdict::QGorensteinOnly);
        assert!(matches!(status.witness, Some(GorensteinWitness::OddNegativeCircle(_))));
        assert_eq!(k3.gorenstein_from_weights().unwrap(), GorensteinVerdict::QGorensteinOnly);

        let c4 = graph_poset(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let status = c4.gorenstein(20).unwrap();
        assert_eq!(status.verdict, GorensteinVerdict::Gorenstein);
        assert!(status.witness.is_none());
        assert_eq!(c4.gorenstein_from_weights().unwrap(), GorensteinVerdict::Gorenstein);

        assert_eq!(p2().gorenstein(20).unwrap().verdict, GorensteinVerdict::Gorenstein);
        assert_eq!(p2().gorenstein_from_weights().unwrap(), GorensteinVerdict::Gorenstein);

        // The diagonal halfedge square fails walk balance on the circuit
        // through both halfedges and the diagonal.
        let status = p1().gorenstein(20).unwrap();
        assert_eq!(status.verdict, GorensteinVerdict::Neither);
        assert!(matches!(status.witness, Some(GorensteinWitness::ImbalancedCircuit(_))));
        assert_eq!(p1().gorenstein_from_weights().unwrap(), GorensteinVerdict::Neither);

        // Two halfedges joined by chains of different parity: the single
        // circuit steps through five edges with signs summing to one.
        let vee = SignedPoset::new(
            4,
            vec![
                rv(&[1, 0, 0, 0]),
                rv(&[-1, 1, 0, 0]),
                rv(&[0, -1, 0, 1]),
                rv(&[0, 0, 1, 0]),
                rv(&[0, 0, -1, 1]),
            ],
        )
        .unwrap();
        let status = vee.gorenstein(20).unwrap();
        assert_eq!(status.verdict, GorensteinVerdict::Neither);
        match status.witness {
            Some(GorensteinWitness::ImbalancedCircuit(ref edges)) => {
                assert_eq!(edges.len(), 5)
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert_eq!(vee.gorenstein_from_weights().unwrap(), GorensteinVerdict::Neither);
    }

    #[test]
    fn decompose_splits_and_sums() {
        let mut roots: Vec<Root> = Vec::new();
        for r in p1().root_vectors() {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), 4));
            roots.push(Root::from_vector(&v).unwrap());
        }
        for r in p2().root_vectors() {
            let mut v = vec![BigInt::zero(); 4];
            v.extend(r.clone());
            roots.push(Root::from_vector(&v).unwrap());
        }
        let p = SignedPoset::new(8, roots).unwrap();
        let parts = p.decompose().unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].poset.dim(), 4);
        assert_eq!(parts[0].vertex_map, vec![0, 1, 2, 3]);
        assert_eq!(parts[0].edge_map, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(parts[1].vertex_map, vec![4, 5, 6, 7]);
        assert_eq!(parts[1].edge_map, vec![7, 8, 9, 10, 11, 12]);
        assert_eq!(parts[0].poset, p1());
        assert_eq!(parts[1].poset, p2());
        assert_eq!(
            p.class_group().unwrap(),
            ClassGroup { free_rank: 5, torsion: vec![bi(2)] }
        );
        assert!(matches!(p.weights(None, None, None), Err(Error::Disconnected)));
        assert_eq!(p.gorenstein_from_weights().unwrap(), GorensteinVerdict::Neither);
        assert_eq!(p.gorenstein(20).unwrap().verdict, GorensteinVerdict::Neither);
    }

    #[test]
    fn tree_has_trivial_region() {
        let tree = SignedPoset::new(3, vec![rv(&[1, 1, 0]), rv(&[0, 1, -1])]).unwrap();
        let w = tree.weights(None, None, None).unwrap();
        assert_eq!(w.ambient_dim(), 0);
        let region = w.conic_region(20).unwrap();
        assert!(region.facets.is_empty());
        assert_eq!(w.conic_count(20).unwrap(), BigInt::one());
        w.verify_exact_sequence().unwrap();
    }

    #[test]
    fn graph_posets_are_all_entering() {
        let k3 = graph_poset(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.len(), 3);
        assert!(k3.validate().is_ok());
        let graph = k3.hasse().unwrap();
        for e in graph.edges() {
            assert_eq!(e.sign(), Some(Sign::Minus));
        }
        assert!(graph_poset(3, &[(0, 0)]).is_err());
        assert!(graph_poset(3, &[(0, 1), (1, 0)]).is_err());
    }
}
