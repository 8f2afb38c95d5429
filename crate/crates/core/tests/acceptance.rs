//! End-to-end acceptance checks: worked examples with golden values,
//! cross-route agreement on seeded random instances, and a source hygiene
//! scan. Each test covers one numbered criterion and prints a PASS line.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use signed_toric::balanced::{
    self, acyclic_orientations_unique_source, graph_tutte, orientation_class, out_degrees,
};
use signed_toric::graph::{BidirectedGraph, Edge, GraphCase, Sign, Walk};
use signed_toric::lp::Rat;
use signed_toric::matrix::IntMatrix;
use signed_toric::matroid::VectorConfig;
use signed_toric::poset::{
    classify_case, gorenstein_for_graph, graph_poset, weights_for_graph, GorensteinVerdict, Root,
    SignedPoset,
};
use signed_toric::toric::{self, ClassGroup, ConicPolytope, Mode};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| bi(x)).collect()
}

fn ri(x: i64) -> Rat {
    Rat::from_integer(bi(x))
}

fn rv(xs: &[i64]) -> Root {
    Root::from_vector(&ints(xs)).unwrap()
}

fn facet_key(p: &ConicPolytope) -> BTreeSet<(Vec<BigInt>, BigInt, BigInt)> {
    p.facets
        .iter()
        .map(|f| (f.functional.clone(), f.lower.clone(), f.upper.clone()))
        .collect()
}

fn point_set(points: Vec<Vec<BigInt>>) -> BTreeSet<Vec<BigInt>> {
    points.into_iter().collect()
}

/// Square with a diagonal and two halfedges, all incidences entering.
fn square_with_diagonal_and_halfedges() -> SignedPoset {
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
fn mixed_sign_square() -> SignedPoset {
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

/// Complete bipartite difference diagram on parts {v1, v2} and
/// {v3, v4, v5}, every edge directed out of the small part.
fn bipartite_poset() -> SignedPoset {
    SignedPoset::new(
        5,
        vec![
            rv(&[-1, 0, 1, 0, 0]),
            rv(&[-1, 0, 0, 1, 0]),
            rv(&[0, -1, 1, 0, 0]),
            rv(&[0, -1, 0, 1, 0]),
            rv(&[-1, 0, 0, 0, 1]),
            rv(&[0, -1, 0, 0, 1]),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_01_hexagon_worked_example() {
    let config = VectorConfig::new(
        4,
        vec![
            ints(&[1, 0, 0, 0]),
            ints(&[0, 1, 0, 0]),
            ints(&[0, 0, 1, 0]),
            ints(&[-1, 0, 0, 1]),
            ints(&[0, -1, 0, 1]),
            ints(&[0, 0, -1, 1]),
        ],
    )
    .unwrap();
    assert_eq!(toric::class_group(&config), ClassGroup { free_rank: 2, torsion: vec![] });

    let rows: [[i64; 2]; 6] = [[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]];
    let basis = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 0], &[0, 1], &[-1, -1]]);
    let w = toric::weight_system(&config, Some(basis)).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(w.free_weight(i), ints(row), "weight of generator {}", i + 1);
        assert!(w.torsion_weight(i).is_empty());
    }

    let circuits = config.circuits(20).unwrap();
    let supports: BTreeSet<Vec<usize>> = circuits.iter().map(|c| c.support.clone()).collect();
    let expect_supports: BTreeSet<Vec<usize>> =
        [vec![0, 1, 3, 4], vec![0, 2, 3, 5], vec![1, 2, 4, 5]].into();
    assert_eq!(supports, expect_supports);

    let region = toric::conic_polytope(&config, &w, 20).unwrap().reduced();
    let expect_facets: BTreeSet<(Vec<BigInt>, BigInt, BigInt)> = [
        (ints(&[1, -1]), bi(-2), bi(2)),
        (ints(&[1, 0]), bi(-2), bi(2)),
        (ints(&[0, 1]), bi(-2), bi(2)),
    ]
    .into();
    assert_eq!(facet_key(&region), expect_facets);

    let points = point_set(toric::lattice_points(&region, Mode::Open, 1).unwrap());
    let expect_points: BTreeSet<Vec<BigInt>> = [
        ints(&[-1, -1]),
        ints(&[-1, 0]),
        ints(&[0, -1]),
        ints(&[0, 0]),
        ints(&[0, 1]),
        ints(&[1, 0]),
        ints(&[1, 1]),
    ]
    .into();
    assert_eq!(points, expect_points);

    assert_eq!(toric::conic_count_enumeration(&config, &w, 20).unwrap(), bi(7));
    assert_eq!(toric::conic_count_formula(&config, 20).unwrap(), bi(7));
    assert_eq!(toric::multiplicity_tutte(&config, &ri(1), &ri(0), 20).unwrap(), ri(7));

    let coeffs = toric::ehrhart_gale_zonotope(&config, 20).unwrap();
    assert_eq!(coeffs.len(), 3);
    assert_eq!(coeffs[0], ri(1));
    for t in 0u64..=3 {
        let closed = toric::lattice_points(&region, Mode::Closed, t).unwrap().len();
        assert_eq!(toric::eval_poly(&coeffs, &bi(t as i64)), ri(closed as i64), "dilation {t}");
    }
    // Reciprocity: with even codimension the value at -1 is the open count.
    assert_eq!(toric::eval_poly(&coeffs, &bi(-1)), ri(7));

    println!(
        "[acceptance] criterion 1: PASS — hexagon region with 7 classes, three counting \
         routes agree, Ehrhart values and reciprocity match"
    );
}

#[test]
fn criterion_02_halfedge_square_explicit_walks() {
    let p = square_with_diagonal_and_halfedges();
    assert_eq!(p.class_group().unwrap(), ClassGroup { free_rank: 3, torsion: vec![] });

    // Walks through the fundamental circuits of e6, e2, e5 over the
    // independent set {e1, e3, e4, e7}.
    let walks = vec![
        Walk { edges: vec![5, 3, 2, 6], vertices: vec![0, 3, 2] },
        Walk { edges: vec![1, 0, 3, 2], vertices: vec![1, 0, 3] },
        Walk { edges: vec![6, 2, 4, 0, 3, 2, 6], vertices: vec![2, 3, 1, 0, 3, 2] },
    ];
    let w = p.weights(Some(&[0, 2, 3, 6]), Some(&[5, 1, 4]), Some(&walks)).unwrap();
    assert_eq!(w.class_group(), ClassGroup { free_rank: 3, torsion: vec![] });
    w.verify_exact_sequence().unwrap();

    let expected: [[i64; 3]; 7] =
        [[0, -1, -1], [0, 1, 0], [1, -1, -2], [-1, 1, 1], [0, 0, 1], [1, 0, 0], [-1, 0, 2]];
    for (e, row) in expected.iter().enumerate() {
        assert_eq!(w.free(e), ints(row), "weight of e{}", e + 1);
        assert_eq!(w.bit(e), 0, "torsion bit of e{}", e + 1);
    }

    println!(
        "[acceptance] criterion 2: PASS — halfedge square: class group Z^3 and all seven \
         weights from the explicit walks"
    );
}

#[test]
fn criterion_03_unbalanced_square_explicit_walks() {
    let p = mixed_sign_square();
    let z2z2 = ClassGroup { free_rank: 2, torsion: vec![bi(2)] };
    assert_eq!(p.class_group().unwrap(), z2z2);

    // Walks through the fundamental circuits of e4 and e6 over the
    // negative circle {e1, e2, e3, e5}.
    let walks = vec![
        Walk { edges: vec![3, 0, 1, 2], vertices: vec![0, 1, 2] },
        Walk { edges: vec![5, 2, 4, 0], vertices: vec![2, 3, 0] },
    ];
    let w = p.weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), Some(&walks)).unwrap();
    assert_eq!(w.class_group(), z2z2);
    w.verify_exact_sequence().unwrap();

    let expected: [[i64; 2]; 6] = [[-1, 1], [1, 0], [-1, -1], [1, 0], [0, -1], [0, 1]];
    let expected_bits: [u8; 6] = [1, 1, 1, 0, 1, 0];
    for (e, row) in expected.iter().enumerate() {
        assert_eq!(w.free(e), ints(row), "weight of e{}", e + 1);
        assert_eq!(w.bit(e), expected_bits[e], "torsion bit of e{}", e + 1);
    }

    println!(
        "[acceptance] criterion 3: PASS — unbalanced square: class group Z^2 + Z/2 and all \
         six weights with torsion residues from the explicit walks"
    );
}

#[test]
fn criterion_04_unbalanced_square_conic_region() {
    let w = mixed_sign_square().weights(Some(&[0, 1, 2, 4]), Some(&[3, 5]), None).unwrap();
    let region = w.conic_region(20).unwrap();
    assert_eq!(region.facets.len(), 4);
    let reduced = region.reduced();
    let expect_facets: BTreeSet<(Vec<BigInt>, BigInt, BigInt)> = [
        (ints(&[1, 0]), bi(-2), bi(2)),
        (ints(&[0, 1]), bi(-2), bi(2)),
        (ints(&[1, -1]), bi(-3), bi(3)),
        (ints(&[1, 1]), bi(-3), bi(3)),
    ]
    .into();
    assert_eq!(facet_key(&reduced), expect_facets);

    let points = point_set(toric::lattice_points(&reduced, Mode::Open, 1).unwrap());
    let mut expect_points = BTreeSet::new();
    for x in -1..=1_i64 {
        for y in -1..=1_i64 {
            expect_points.insert(ints(&[x, y]));
        }
    }
    assert_eq!(points, expect_points);

    assert_eq!(w.conic_count(20).unwrap(), bi(18));
    assert_eq!(toric::conic_count_formula(&w.config, 20).unwrap(), bi(18));
    assert_eq!(toric::multiplicity_tutte(&w.config, &ri(1), &ri(0), 20).unwrap(), ri(18));

    println!(
        "[acceptance] criterion 4: PASS — unbalanced square: four slab pairs, nine interior \
         points, 18 classes by all routes"
    );
}

#[test]
fn criterion_05_bipartite_orientation_bijection() {
    let p = bipartite_poset();
    let w = p.weights(Some(&[1, 2, 3, 5]), None, None).unwrap();
    let expected: [[i64; 2]; 6] = [[1, 0], [-1, -1], [-1, 0], [1, 1], [0, 1], [0, -1]];
    for (e, row) in expected.iter().enumerate() {
        assert_eq!(w.free(e), ints(row), "weight of e{}", e + 1);
        assert_eq!(w.bit(e), 0);
    }

    let region = w.conic_region(20).unwrap();
    let points = point_set(toric::lattice_points(&region, Mode::Open, 1).unwrap());
    let expect_points: BTreeSet<Vec<BigInt>> = [
        ints(&[0, 1]),
        ints(&[1, 1]),
        ints(&[-1, 0]),
        ints(&[0, 0]),
        ints(&[1, 0]),
        ints(&[-1, -1]),
        ints(&[0, -1]),
    ]
    .into();
    assert_eq!(points, expect_points);

    let graph = w.system.graph.clone();
    let orientations = acyclic_orientations_unique_source(&graph, 0, 20).unwrap();
    assert_eq!(orientations.len(), 7);

    // Each orientation lists which edges keep their direction out of the
    // small part; the class is the sum of the kept edges' weights.
    let assignments: [([bool; 6], [i64; 2]); 7] = [
        ([true, true, true, true, true, false], [0, 1]),
        ([true, true, false, true, true, false], [1, 1]),
        ([true, true, true, false, true, false], [-1, 0]),
        ([true, true, false, false, true, false], [0, 0]),
        ([true, true, false, true, true, true], [1, 0]),
        ([true, true, true, false, true, true], [-1, -1]),
        ([true, true, false, false, true, true], [0, -1]),
    ];
    let got: BTreeSet<Vec<bool>> = orientations.iter().cloned().collect();
    let expect_set: BTreeSet<Vec<bool>> =
        assignments.iter().map(|(o, _)| o.to_vec()).collect();
    assert_eq!(got, expect_set);
    for (orientation, class) in &assignments {
        assert_eq!(
            orientation_class(&w, orientation).unwrap(),
            ints(class),
            "class of orientation {orientation:?}"
        );
    }

    // Bijection: the seven classes are distinct and exhaust the points.
    let classes: Vec<Vec<BigInt>> =
        orientations.iter().map(|o| orientation_class(&w, o).unwrap()).collect();
    let class_set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
    assert_eq!(classes.len(), class_set.len());
    assert_eq!(class_set, points);

    println!(
        "[acceptance] criterion 5: PASS — bipartite diagram: golden weights, seven interior \
         points, seven single-source orientations, and the verified bijection"
    );
}

#[test]
fn criterion_06_type_a_reduction_golden() {
    let p = SignedPoset::new(
        4,
        vec![
            rv(&[1, 0, 1, 0]),
            rv(&[1, 0, 0, 1]),
            rv(&[0, 1, 1, 0]),
            rv(&[0, 1, 0, 1]),
            rv(&[1, 0, 0, 0]),
            rv(&[0, 1, 0, 0]),
        ],
    )
    .unwrap();
    let red = balanced::reduce(&p).unwrap();
    assert_eq!(classify_case(&red.graph).unwrap(), GraphCase::Balanced);
    assert!(balanced::is_difference_graph(&red.graph));
    assert_eq!(red.switching, vec![0, 1]);
    assert_eq!(red.new_vertex, Some(4));
    assert_eq!(
        red.poset.roots(),
        &[
            rv(&[-1, 0, 1, 0, 0]),
            rv(&[-1, 0, 0, 1, 0]),
            rv(&[0, -1, 1, 0, 0]),
            rv(&[0, -1, 0, 1, 0]),
            rv(&[-1, 0, 0, 0, 1]),
            rv(&[0, -1, 0, 0, 1]),
        ]
    );
    assert_eq!(red.poset, bipartite_poset());
    let z2 = ClassGroup { free_rank: 2, torsion: vec![] };
    assert_eq!(p.class_group().unwrap(), z2);
    assert_eq!(red.poset.class_group().unwrap(), z2);

    println!(
        "[acceptance] criterion 6: PASS — mixed square reduces to the balanced bipartite \
         diagram: switching set {{v1, v2}}, six difference generators"
    );
}

fn is_bipartite(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
    let mut adjacent = vec![Vec::new(); vertex_count];
    for &(u, v) in edges {
        adjacent[u].push(v);
        adjacent[v].push(u);
    }
    let mut color: Vec<Option<bool>> = vec![None; vertex_count];
    for start in 0..vertex_count {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            let cx = color[x].unwrap();
            for &y in &adjacent[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        queue.push(y);
                    }
                    Some(cy) => {
                        if cy == cx {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Random connected simple graph: a random spanning tree plus extra edges.
fn random_simple_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> (usize, Vec<(usize, usize)>) {
    let d = rng.gen_range(2..=max_vertices);
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..d {
        let u = rng.gen_range(0..v);
        pairs.insert((u, v));
    }
    let extras: usize = rng.gen_range(0..=d);
    for _ in 0..extras {
        let u = rng.gen_range(0..d);
        let v = rng.gen_range(0..d);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    (d, pairs.into_iter().collect())
}

#[test]
fn criterion_07_random_graph_posets_gorenstein_iff_bipartite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let (d, edges) = random_simple_graph(&mut rng, 8);
        let label = format!("instance {case}: {d} vertices, {} edges", edges.len());
        let poset = graph_poset(d, &edges).unwrap();
        let verdict = poset.gorenstein_from_weights().unwrap();
        assert_ne!(verdict, GorensteinVerdict::Neither, "{label}");
        assert_eq!(
            verdict == GorensteinVerdict::Gorenstein,
            is_bipartite(d, &edges),
            "{label}"
        );
        // Where circuit enumeration stays small, the walk route must agree.
        if edges.len() <= 12 {
            let status = poset.gorenstein(200).unwrap();
            assert_eq!(status.verdict, verdict, "{label}");
        }
    }
    println!(
        "[acceptance] criterion 7: PASS — 50 random connected graphs: always at least \
         Q-Gorenstein, Gorenstein exactly for the bipartite ones"
    );
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Random connected diagram with at most ten edges whose incidence columns
/// form a legitimate generator set: pairwise distinct up to sign and
/// spanning a strongly convex cone.
fn random_diagram(rng: &mut ChaCha8Rng) -> (BidirectedGraph, VectorConfig) {
    loop {
        let d = rng.gen_range(1..=6);
        let mut edges = Vec::new();
        for v in 1..d {
            let u = rng.gen_range(0..v);
            edges.push(Edge::Ordinary {
                u,
                v,
                tau_u: random_sign(rng),
                tau_v: random_sign(rng),
            });
        }
        let extras: usize = rng.gen_range(0..=3);
        for _ in 0..extras {
            if d < 2 {
                break;
            }
            let u = rng.gen_range(0..d);
            let v = rng.gen_range(0..d);
            if u == v {
                continue;
            }
            edges.push(Edge::Ordinary {
                u: u.min(v),
                v: u.max(v),
                tau_u: random_sign(rng),
                tau_v: random_sign(rng),
            });
        }
        let halfedges: usize = rng.gen_range(0..=2);
        for _ in 0..halfedges {
            edges.push(Edge::Halfedge { v: rng.gen_range(0..d), tau: random_sign(rng) });
        }
        if edges.is_empty() || edges.len() > 10 {
            continue;
        }
        let Ok(graph) = BidirectedGraph::new(d, edges) else { continue };
        if !graph.is_connected() {
            continue;
        }
        let Ok(config) = graph.config() else { continue };
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let distinct = (0..config.len()).all(|i| {
            let mut v = config.vector(i).to_vec();
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for x in v.iter_mut() {
                    *x = -&*x;
                }
            }
            seen.insert(v)
        });
        if !distinct {
            continue;
        }
        return (graph, config);
    }
}

#[test]
fn criterion_08_random_diagram_cross_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let (graph, config) = random_diagram(&mut rng);
        let label = format!(
            "instance {case}: {} vertices, {} edges",
            graph.vertex_count(),
            graph.edge_count()
        );

        // (a) Independent circuit enumerations agree: the matroid route on
        // the columns and the walk route on the diagram give the same
        // supports, with the same kernel vector up to sign.
        let from_matroid: BTreeMap<Vec<usize>, Vec<BigInt>> = config
            .circuits(20)
            .unwrap()
            .into_iter()
            .map(|c| (c.support, c.vector))
            .collect();
        let from_walks: BTreeMap<Vec<usize>, Vec<BigInt>> = graph
            .circuits(20)
            .unwrap()
            .into_iter()
            .map(|c| (c.support, c.vector))
            .collect();
        let matroid_supports: Vec<&Vec<usize>> = from_matroid.keys().collect();
        let walk_supports: Vec<&Vec<usize>> = from_walks.keys().collect();
        assert_eq!(matroid_supports, walk_supports, "{label}");
        for (support, mv) in &from_matroid {
            let wv = &from_walks[support];
            let negated: Vec<BigInt> = mv.iter().map(|x| -x).collect();
            assert!(
                wv == mv || *wv == negated,
                "{label}: circuit {support:?} kernel vectors disagree"
            );
        }

        // (b) Four counting routes agree.
        let w = weights_for_graph(&graph, None, None, None).unwrap();
        let count = w.conic_count(20).unwrap();
        let ws = toric::weight_system(&config, None).unwrap();
        assert_eq!(count, toric::conic_count_enumeration(&config, &ws, 20).unwrap(), "{label}");
        assert_eq!(count, toric::conic_count_formula(&config, 20).unwrap(), "{label}");
        assert_eq!(
            Rat::from_integer(count.clone()),
            toric::multiplicity_tutte(&config, &Rat::one(), &Rat::zero(), 20).unwrap(),
            "{label}"
        );

        // (c) Lattice-point counts follow the polynomial at small dilations
        // and reciprocity recovers the open count.
        let coeffs = toric::ehrhart_gale_zonotope(&config, 20).unwrap();
        let region = toric::conic_polytope(&config, &ws, 20).unwrap();
        for t in 1u64..=3 {
            let closed = toric::lattice_points(&region, Mode::Closed, t).unwrap().len();
            assert_eq!(
                toric::eval_poly(&coeffs, &BigInt::from(t)),
                Rat::from_integer(BigInt::from(closed)),
                "{label}: dilation {t}"
            );
        }
        let open = toric::lattice_points(&region, Mode::Open, 1).unwrap().len();
        let mut reciprocal = toric::eval_poly(&coeffs, &bi(-1));
        if ws.ambient_dim() % 2 == 1 {
            reciprocal = -reciprocal;
        }
        assert_eq!(reciprocal, Rat::from_integer(BigInt::from(open)), "{label}");

        // (d) The weights present the class group exactly.
        w.verify_exact_sequence().unwrap();

        // (e) The circuit-walk Gorenstein test agrees with the canonical
        // class computed from the weights.
        let status = gorenstein_for_graph(&graph, 200).unwrap();
        let (free, bit) = w.canonical();
        let expected = if free.iter().any(|x| !x.is_zero()) {
            GorensteinVerdict::Neither
        } else if bit != 0 {
            GorensteinVerdict::QGorensteinOnly
        } else {
            GorensteinVerdict::Gorenstein
        };
        assert_eq!(status.verdict, expected, "{label}");

        // (f) The case arithmetic predicts the elementary divisors.
        let e = graph.edge_count();
        let d = graph.vertex_count();
        let (free_rank, torsion) = match classify_case(&graph).unwrap() {
            GraphCase::Balanced => (e + 1 - d, vec![]),
            GraphCase::WithHalfedge => (e - d, vec![]),
            GraphCase::Unbalanced => (e - d, vec![bi(2)]),
        };
        assert_eq!(toric::class_group(&config), ClassGroup { free_rank, torsion }, "{label}");
    }
    println!(
        "[acceptance] criterion 8: PASS — 100 random diagrams: circuits, four counting \
         routes, dilation counts with reciprocity, exactness, Gorenstein routes, and case \
         arithmetic all agree"
    );
}

/// Random connected difference diagram: a simple graph with every edge
/// directed along a random vertex order, so the diagram is acyclic.
fn random_acyclic_difference(rng: &mut ChaCha8Rng) -> BidirectedGraph {
    loop {
        let d = rng.gen_range(2..=6);
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(rng);
        let mut position = vec![0usize; d];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for v in 1..d {
            let u = rng.gen_range(0..v);
            pairs.insert((u, v));
        }
        let extras: usize = rng.gen_range(0..=3);
        for _ in 0..extras {
            let u = rng.gen_range(0..d);
            let v = rng.gen_range(0..d);
            if u != v {
                pairs.insert((u.min(v), u.max(v)));
            }
        }
        if pairs.len() > 8 {
            continue;
        }
        let edges: Vec<Edge> = pairs
            .iter()
            .map(|&(a, b)| {
                let (tau_u, tau_v) = if position[a] < position[b] {
                    (Sign::Minus, Sign::Plus)
                } else {
                    (Sign::Plus, Sign::Minus)
                };
                Edge::Ordinary { u: a, v: b, tau_u, tau_v }
            })
            .collect();
        return BidirectedGraph::new(d, edges).unwrap();
    }
}

#[test]
fn criterion_09_random_acyclic_bijection_and_chip_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut chip_pairs = 0usize;
    for case in 0..50 {
        let graph = random_acyclic_difference(&mut rng);
        let label = format!(
            "instance {case}: {} vertices, {} edges",
            graph.vertex_count(),
            graph.edge_count()
        );
        assert!(balanced::is_difference_graph(&graph), "{label}");

        let w = weights_for_graph(&graph, None, None, None).unwrap();
        let region = w.conic_region(60).unwrap();
        let points = point_set(toric::lattice_points(&region, Mode::Open, 1).unwrap());

        // The cycle route describes the same region.
        let from_cycles = balanced::conic_region_from_cycles(&w, 60).unwrap();
        let cycle_points = point_set(toric::lattice_points(&from_cycles, Mode::Open, 1).unwrap());
        assert_eq!(points, cycle_points, "{label}: cycle route disagrees");

        // Bijection with single-source acyclic orientations at a random
        // fixed source, and both Tutte counts.
        let source = rng.gen_range(0..graph.vertex_count());
        let orientations = acyclic_orientations_unique_source(&graph, source, 60).unwrap();
        let classes: Vec<Vec<BigInt>> =
            orientations.iter().map(|o| orientation_class(&w, o).unwrap()).collect();
        let class_set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
        assert_eq!(classes.len(), class_set.len(), "{label}: repeated class");
        assert_eq!(class_set, points, "{label}: classes do not exhaust the points");
        assert_eq!(
            BigInt::from(orientations.len()),
            graph_tutte(&graph, 1, 0, 60).unwrap(),
            "{label}: graph expansion count"
        );
        assert_eq!(
            Rat::from_integer(BigInt::from(points.len())),
            toric::multiplicity_tutte(&w.config, &Rat::one(), &Rat::zero(), 20).unwrap(),
            "{label}: multiplicity expansion count"
        );

        // Chip-firing identity on two random orientation pairs.
        let a = graph.incidence_matrix();
        let m = graph.edge_count();
        for _ in 0..2 {
            let o1: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
            let o2: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
            let diff: Vec<BigInt> =
                (0..m).map(|e| bi(o1[e] as i64) - bi(o2[e] as i64)).collect();
            let lhs = a.mul_vec(&diff);
            let out1 = out_degrees(&graph, &o1).unwrap();
            let out2 = out_degrees(&graph, &o2).unwrap();
            let rhs: Vec<BigInt> = out2.iter().zip(&out1).map(|(x, y)| x - y).collect();
            assert_eq!(lhs, rhs, "{label}: chip identity");
            chip_pairs += 1;
        }
    }
    assert_eq!(chip_pairs, 100);
    println!(
        "[acceptance] criterion 9: PASS — 50 random acyclic diagrams: orientation bijection, \
         matching Tutte counts, and 100 chip-firing identity pairs"
    );
}

#[test]
fn criterion_10_core_is_float_free() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("src");
    let mut checked = 0usize;
    for entry in fs::read_dir(&src).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("rs") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        for needle in ["f32", "f64"] {
            assert!(
                !text.contains(needle),
                "{} mentions {needle}; the library must stay in exact arithmetic",
                path.display()
            );
        }
        checked += 1;
    }
    assert!(checked >= 9, "expected at least 9 source files, scanned {checked}");
    println!(
        "[acceptance] criterion 10: PASS — {checked} library source files use exact \
         arithmetic only"
    );
}
