//! Divisor class groups of toric rings attached to vector configurations,
//! weight systems (projections of divisor classes), the conic region cut
//! out by circuit inequalities, and lattice-point counts of conic classes
//! by enumeration, by the subset-gcd formula, and through the multiplicity
//! Tutte polynomial and the Ehrhart polynomial of the Gale zonotope.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, Constraint, LpOutcome, Rat, Rel};
use crate::matrix::{self, IntMatrix};
use crate::matroid::{MatroidCircuit, VectorConfig};

/// Finitely generated abelian group Z^free ⊕ Z/t_1 ⊕ ... with t_i | t_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ClassGroup {
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// The divisor class group Z^n / im(A^T) in invariant-factor form.
pub fn class_group(v: &VectorConfig) -> ClassGroup {
    let snf = matrix::smith_normal_form(&v.matrix());
    ClassGroup { free_rank: v.len() - snf.rank(), torsion: snf.torsion() }
}

/// A projection of Z^n onto the class group: each configuration vector
/// gets a free weight in Z^t (its Gale vector for the chosen kernel basis)
/// and a residue per torsion factor.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    pub class_group: ClassGroup,
    /// Kernel basis matrix (n rows, t columns); row i is the free weight
    /// of vector i.
    pub kernel: IntMatrix,
    /// Torsion residue rows: entry (k, j) is the k-th residue of vector j,
    /// reduced into [0, moduli_k).
    torsion_rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl WeightSystem {
    pub fn ambient_dim(&self) -> usize {
        self.kernel.cols()
    }

    /// Free weight of configuration vector i.
    pub fn free_weight(&self, i: usize) -> Vec<BigInt> {
        self.kernel.row(i)
    }

    /// Torsion residues of configuration vector i.
    pub fn torsion_weight(&self, i: usize) -> Vec<BigInt> {
        self.torsion_rows.iter().map(|(row, m)| row[i].mod_floor(m)).collect()
    }

    /// Image of an integer divisor vector a in Z^t plus torsion residues.
    pub fn project(&self, a: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let free = self.kernel.transpose().mul_vec(a);
        let tor = self
            .torsion_rows
            .iter()
            .map(|(row, m)| {
                let dot: BigInt = row.iter().zip(a).map(|(r, x)| r * x).sum();
                dot.mod_floor(m)
            })
            .collect();
        (free, tor)
    }
}

/// Build a weight system from a configuration, optionally with a caller
/// supplied kernel basis (columns must be a saturated basis of ker A_V).
pub fn weight_system(v: &VectorConfig, kernel_choice: Option<IntMatrix>) -> Result<WeightSystem> {
    let a = v.matrix();
    let t = v.len() - matrix::rank(&a);
    let kernel = match kernel_choice {
        None => matrix::kernel_basis(&a),
        Some(k) => {
            if k.rows() != v.len() || k.cols() != t {
                return Err(Error::Invalid(format!(
                    "kernel basis must be {} x {t}",
                    v.len()
                )));
            }
            if !a.mul(&k).is_zero() {
                return Err(Error::Invalid("supplied basis is not in the kernel".into()));
            }
            let snf = matrix::smith_normal_form(&k);
            if snf.rank() != t || !snf.diagonal[..t].iter().all(|d| d.is_one()) {
                return Err(Error::Invalid("supplied kernel basis is not saturated".into()));
            }
            k
        }
    };
    // Torsion residues come from the left transform of SNF(A^T): the rows
    // whose invariant factor exceeds one, taken mod that factor.
    let snf = matrix::smith_normal_form(&a.transpose());
    let mut torsion_rows = Vec::new();
    for (i, s) in snf.diagonal.iter().enumerate() {
        if !s.is_zero() && !s.is_one() {
            torsion_rows.push((snf.left.row(i), s.clone()));
        }
    }
    let class_group =
        ClassGroup { free_rank: t, torsion: torsion_rows.iter().map(|(_, m)| m.clone()).collect() };
    Ok(WeightSystem { class_group, kernel, torsion_rows })
}

/// One slab of the conic region: lower < functional . z < upper, where the
/// bounds are the negative and positive parts of the circuit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub functional: Vec<BigInt>,
    pub lower: BigInt,
    pub upper: BigInt,
    /// Support of the circuit the slab came from (column indices).
    pub circuit: Vec<usize>,
}

/// The conic region in weight coordinates: one slab per matroid circuit,
/// kept without deduplication; `reduced` merges parallel slabs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicPolytope {
    pub ambient_dim: usize,
    pub facets: Vec<Facet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Open,
    Closed,
}

impl ConicPolytope {
    pub fn contains(&self, z: &[BigInt], mode: Mode, dilation: u64) -> bool {
        let d = BigInt::from(dilation);
        self.facets.iter().all(|f| {
            let val: BigInt = f.functional.iter().zip(z).map(|(c, x)| c * x).sum();
            let lo = &f.lower * &d;
            let hi = &f.upper * &d;
            match mode {
                Mode::Closed => lo <= val && val <= hi,
                Mode::Open => lo < val && val < hi,
            }
        })
    }

    /// Merge slabs with parallel functionals, keeping the tightest bounds.
    /// The functional sign is normalized to a positive leading entry.
    pub fn reduced(&self) -> ConicPolytope {
        let mut out: Vec<Facet> = Vec::new();
        for f in &self.facets {
            let mut functional = f.functional.clone();
            let mut lower = f.lower.clone();
            let mut upper = f.upper.clone();
            if let Some(lead) = functional.iter().find(|x| !x.is_zero()) {
                if lead.is_negative() {
                    for x in functional.iter_mut() {
                        *x = -&*x;
                    }
                    let l = -upper;
                    upper = -lower;
                    lower = l;
                }
            }
            if let Some(existing) = out.iter_mut().find(|g| g.functional == functional) {
                if lower > existing.lower {
                    existing.lower = lower;
                }
                if upper < existing.upper {
                    existing.upper = upper;
                }
            } else {
                out.push(Facet { functional, lower, upper, circuit: f.circuit.clone() });
            }
        }
        ConicPolytope { ambient_dim: self.ambient_dim, facets: out }
    }
}

/// Conic region from the circuits of a configuration, written in the
/// coordinates of the given weight system.
pub fn conic_polytope(v: &VectorConfig, w: &WeightSystem, limit: usize) -> Result<ConicPolytope> {
    let circuits = v.circuits(limit)?;
    conic_polytope_from_circuits(w, &circuits)
}

pub fn conic_polytope_from_circuits(
    w: &WeightSystem,
    circuits: &[MatroidCircuit],
) -> Result<ConicPolytope> {
    let t = w.ambient_dim();
    let mut facets = Vec::with_capacity(circuits.len());
    for c in circuits {
        let sol = lp::solve_rational_system(&w.kernel, &c.vector)
            .ok_or_else(|| Error::Invalid("circuit vector outside the kernel span".into()))?;
        let mut functional = Vec::with_capacity(t);
        for x in &sol {
            if !x.is_integer() {
                return Err(Error::Invalid("kernel basis does not span the circuit lattice".into()));
            }
            functional.push(x.to_integer());
        }
        let upper: BigInt = c.vector.iter().filter(|x| x.is_positive()).cloned().sum();
        let lower: BigInt = c.vector.iter().filter(|x| x.is_negative()).cloned().sum();
        facets.push(Facet { functional, lower, upper, circuit: c.support.clone() });
    }
    Ok(ConicPolytope { ambient_dim: t, facets })
}

/// Integer points of the (open or closed) region dilated by `dilation`,
/// in lexicographic order. The closed region must be bounded.
pub fn lattice_points(p: &ConicPolytope, mode: Mode, dilation: u64) -> Result<Vec<Vec<BigInt>>> {
    let t = p.ambient_dim;
    if t == 0 {
        return Ok(vec![vec![]]);
    }
    let d = BigInt::from(dilation);
    let mut constraints = Vec::with_capacity(2 * p.facets.len());
    for f in &p.facets {
        constraints.push(Constraint::from_int(&f.functional, Rel::Le, &f.upper * &d));
        constraints.push(Constraint::from_int(&f.functional, Rel::Ge, &f.lower * &d));
    }
    let mut lo = Vec::with_capacity(t);
    let mut hi = Vec::with_capacity(t);
    for j in 0..t {
        let mut obj = vec![Rat::zero(); t];
        obj[j] = Rat::one();
        match lp::optimize(&obj, false, &constraints)? {
            LpOutcome::Infeasible => return Ok(vec![]),
            LpOutcome::Unbounded => return Err(Error::UnboundedRegion),
            LpOutcome::Optimal { value, .. } => lo.push(value.ceil().to_integer()),
        }
        match lp::optimize(&obj, true, &constraints)? {
            LpOutcome::Infeasible => return Ok(vec![]),
            LpOutcome::Unbounded => return Err(Error::UnboundedRegion),
            LpOutcome::Optimal { value, .. } => hi.push(value.floor().to_integer()),
        }
    }
    let mut out = Vec::new();
    let mut point = vec![BigInt::zero(); t];
    enumerate_box(0, &lo, &hi, &mut point, &mut |z| {
        if p.contains(z, mode, dilation) {
            out.push(z.to_vec());
        }
    });
    Ok(out)
}

fn enumerate_box(
    j: usize,
    lo: &[BigInt],
    hi: &[BigInt],
    point: &mut Vec<BigInt>,
    visit: &mut impl FnMut(&[BigInt]),
) {
    if j == lo.len() {
        visit(point);
        return;
    }
    let mut x = lo[j].clone();
    while x <= hi[j] {
        point[j] = x.clone();
        enumerate_box(j + 1, lo, hi, point, visit);
        x += 1;
    }
}

/// Number of conic classes: open lattice points of the region times the
/// torsion order.
pub fn conic_count_enumeration(
    v: &VectorConfig,
    w: &WeightSystem,
    limit: usize,
) -> Result<BigInt> {
    let p = conic_polytope(v, w, limit)?;
    let pts = lattice_points(&p, Mode::Open, 1)?;
    Ok(BigInt::from(pts.len()) * w.class_group.torsion_order())
}

fn subset_from_mask(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// gcd of the r-by-r minors of the column submatrix, zero when the subset
/// has rank below r.
fn top_minor_gcd(full: &IntMatrix, subset: &[usize], r: usize) -> BigInt {
    if subset.len() < r {
        return BigInt::zero();
    }
    let sub = full.column_submatrix(subset);
    let snf = matrix::smith_normal_form(&sub);
    if snf.rank() < r {
        return BigInt::zero();
    }
    snf.diagonal[..r].iter().product()
}

/// Closed-form count of conic classes: alternating subset sum of top minor
/// gcds over all column subsets.
pub fn conic_count_formula(v: &VectorConfig, limit: usize) -> Result<BigInt> {
    let n = v.len();
    if n > limit {
        return Err(Error::Limit { required: n, limit });
    }
    let full = v.matrix();
    let r = matrix::rank(&full);
    let mut total = BigInt::zero();
    for mask in 0..(1usize << n) {
        let s = subset_from_mask(mask, n);
        let g = top_minor_gcd(&full, &s, r);
        if g.is_zero() {
            continue;
        }
        if (s.len() - r).is_multiple_of(2) {
            total += g;
        } else {
            total -= g;
        }
    }
    Ok(total)
}

fn rat_pow(base: &Rat, exp: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Multiplicity Tutte polynomial evaluated at exact rationals:
/// sum over subsets of g_rk(S) (x-1)^(rk V - rk S) (y-1)^(#S - rk S).
pub fn multiplicity_tutte(v: &VectorConfig, x: &Rat, y: &Rat, limit: usize) -> Result<Rat> {
    let n = v.len();
    if n > limit {
        return Err(Error::Limit { required: n, limit });
    }
    let full = v.matrix();
    let r = matrix::rank(&full);
    let xm = x - Rat::one();
    let ym = y - Rat::one();
    let mut total = Rat::zero();
    for mask in 0..(1usize << n) {
        let s = subset_from_mask(mask, n);
        let sub = full.column_submatrix(&s);
        let snf = matrix::smith_normal_form(&sub);
        let rk = snf.rank();
        let g: BigInt = snf.diagonal[..rk].iter().product();
        total += Rat::from_integer(g) * rat_pow(&xm, r - rk) * rat_pow(&ym, s.len() - rk);
    }
    Ok(total)
}

/// Ehrhart polynomial of the lattice Gale zonotope, as exact rational
/// coefficients in ascending degree (constant term first, degree n - r).
pub fn ehrhart_gale_zonotope(v: &VectorConfig, limit: usize) -> Result<Vec<Rat>> {
    let n = v.len();
    if n > limit {
        return Err(Error::Limit { required: n, limit });
    }
    let full = v.matrix();
    let r = matrix::rank(&full);
    let gv = top_minor_gcd(&full, &(0..n).collect::<Vec<_>>(), r);
    let mut coeffs = vec![Rat::zero(); n - r + 1];
    for mask in 0..(1usize << n) {
        let s = subset_from_mask(mask, n);
        let g = top_minor_gcd(&full, &s, r);
        if g.is_zero() {
            continue;
        }
        let degree = n - s.len();
        coeffs[degree] += Rat::new(g, gv.clone());
    }
    Ok(coeffs)
}

/// Evaluate a coefficient list (ascending degree) at an integer.
pub fn eval_poly(coeffs: &[Rat], t: &BigInt) -> Rat {
    let tt = Rat::from_integer(t.clone());
    let mut out = Rat::zero();
    for c in coeffs.iter().rev() {
        out = out * &tt + c;
    }
    out
}

/// Decide whether the divisorial ideal with exponent vector `a` is conic:
/// some rational x satisfies a_i - 1 < v_i . x <= a_i for every i.
pub fn is_conic_class(v: &VectorConfig, a: &[BigInt]) -> Result<bool> {
    if a.len() != v.len() {
        return Err(Error::Invalid("exponent vector length mismatch".into()));
    }
    let mut constraints = Vec::with_capacity(2 * v.len());
    for (i, ai) in a.iter().enumerate() {
        let col = v.vector(i);
        constraints.push(Constraint::from_int(col, Rel::Le, ai.clone()));
        constraints.push(Constraint::from_int(col, Rel::Gt, ai - BigInt::one()));
    }
    Ok(lp::rational_feasible(&constraints)?.is_some())
}

/// Class of the canonical module: the image of (1, ..., 1).
pub fn canonical_class(w: &WeightSystem) -> (Vec<BigInt>, Vec<BigInt>) {
    let ones = vec![BigInt::one(); w.kernel.rows()];
    w.project(&ones)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn ri(v: i64) -> Rat {
        Rat::from_integer(bi(v))
    }

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
    }

    fn hexagon_config() -> VectorConfig {
        VectorConfig::new(
            4,
            vecs(&[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 0, 1, 0],
                &[-1, 0, 0, 1],
                &[0, -1, 0, 1],
                &[0, 0, -1, 1],
            ]),
        )
        .unwrap()
    }

    fn hexagon_weights() -> (VectorConfig, WeightSystem) {
        let v = hexagon_config();
        let basis = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 0], &[0, 1], &[-1, -1]]);
        let w = weight_system(&v, Some(basis)).unwrap();
        (v, w)
    }

    #[test]
    fn hexagon_class_group_is_free_of_rank_two() {
        let v = hexagon_config();
        let cg = class_group(&v);
        assert_eq!(cg, ClassGroup { free_rank: 2, torsion: vec![] });
        assert_eq!(cg.describe(), "Z^2");
        assert_eq!(cg.torsion_order(), bi(1));
    }

    #[test]
    fn hexagon_weights_match_chosen_basis() {
        let (_, w) = hexagon_weights();
        let expect = [[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(w.free_weight(i), vec![bi(e[0]), bi(e[1])]);
            assert!(w.torsion_weight(i).is_empty());
        }
    }

    #[test]
    fn hexagon_conic_polytope_and_points() {
        let (v, w) = hexagon_weights();
        let p = conic_polytope(&v, &w, 20).unwrap();
        assert_eq!(p.ambient_dim, 2);
        assert_eq!(p.facets.len(), 3);
        assert_eq!(p.facets[0].functional, vec![bi(1), bi(-1)]);
        assert_eq!((p.facets[0].lower.clone(), p.facets[0].upper.clone()), (bi(-2), bi(2)));
        assert_eq!(p.facets[1].functional, vec![bi(1), bi(0)]);
        assert_eq!(p.facets[2].functional, vec![bi(0), bi(1)]);
        let pts = lattice_points(&p, Mode::Open, 1).unwrap();
        let expect = vecs(&[&[-1, -1], &[-1, 0], &[0, -1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(pts, expect);
    }

    #[test]
    fn hexagon_counts_agree_across_routes() {
        let (v, w) = hexagon_weights();
        assert_eq!(conic_count_enumeration(&v, &w, 20).unwrap(), bi(7));
        assert_eq!(conic_count_formula(&v, 20).unwrap(), bi(7));
        assert_eq!(multiplicity_tutte(&v, &ri(1), &ri(0), 20).unwrap(), ri(7));
    }

    #[test]
    fn hexagon_ehrhart_and_reciprocity() {
        let (v, w) = hexagon_weights();
        let coeffs = ehrhart_gale_zonotope(&v, 20).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[0], ri(1));
        let p = conic_polytope(&v, &w, 20).unwrap();
        for t in 1u64..=3 {
            let closed = lattice_points(&p, Mode::Closed, t).unwrap().len();
            assert_eq!(eval_poly(&coeffs, &bi(t as i64)), ri(closed as i64));
        }
        // Reciprocity: (-1)^(n-r) ehr(-1) equals the open count.
        let rec = eval_poly(&coeffs, &bi(-1));
        assert_eq!(rec, ri(7));
    }

    #[test]
    fn conic_membership_of_classes() {
        let (v, _) = hexagon_weights();
        // Unit vectors are conic; a doubled one is not.
        let mut a = vec![bi(0); 6];
        a[0] = bi(1);
        assert!(is_conic_class(&v, &a).unwrap());
        a[0] = bi(2);
        assert!(!is_conic_class(&v, &a).unwrap());
        assert!(is_conic_class(&v, &vec![bi(0); 6]).unwrap());
    }

    #[test]
    fn canonical_class_of_hexagon_vanishes() {
        let (_, w) = hexagon_weights();
        let (free, tor) = canonical_class(&w);
        assert_eq!(free, vec![bi(0), bi(0)]);
        assert!(tor.is_empty());
    }

    #[test]
    fn torsion_appears_for_doubled_lattice() {
        // Single column (2, 1) is primitive; with (0, 1) the quotient is
        // trivial, but columns (1, 1) and (1, -1) give torsion Z/2.
        let v = VectorConfig::new(2, vecs(&[&[1, 1], &[1, -1]])).unwrap();
        let cg = class_group(&v);
        assert_eq!(cg, ClassGroup { free_rank: 0, torsion: vec![bi(2)] });
        let w = weight_system(&v, None).unwrap();
        assert_eq!(w.ambient_dim(), 0);
        // The two generators fall in opposite torsion classes modulo the
        // image: their difference is (0, 2)... both residues are defined
        // mod 2 and the projection kills the image of A^T.
        let im1 = w.project(&v.matrix().transpose().mul_vec(&[bi(1), bi(0)]));
        assert!(im1.0.is_empty());
        assert_eq!(im1.1, vec![bi(0)]);
        let sum = w.project(&[bi(1), bi(1)]);
        assert_eq!(sum.1, vec![bi(0)]);
        let single = w.project(&[bi(1), bi(0)]);
        assert_eq!(single.1, vec![bi(1)]);
    }

    #[test]
    fn independent_config_is_zero_dimensional() {
        let v = VectorConfig::new(2, vecs(&[&[1, 0], &[0, 1]])).unwrap();
        let w = weight_system(&v, None).unwrap();
        let p = conic_polytope(&v, &w, 20).unwrap();
        assert_eq!(p.ambient_dim, 0);
        assert_eq!(lattice_points(&p, Mode::Open, 1).unwrap(), vec![Vec::<BigInt>::new()]);
        assert_eq!(conic_count_enumeration(&v, &w, 20).unwrap(), bi(1));
        assert_eq!(conic_count_formula(&v, 20).unwrap(), bi(1));
        let coeffs = ehrhart_gale_zonotope(&v, 20).unwrap();
        assert_eq!(coeffs, vec![ri(1)]);
    }

    #[test]
    fn single_vector_tutte_is_x() {
        let v = VectorConfig::new(2, vecs(&[&[1, 0]])).unwrap();
        for (x, y) in [(2, 3), (1, 0), (5, -1)] {
            assert_eq!(multiplicity_tutte(&v, &ri(x), &ri(y), 20).unwrap(), ri(x));
        }
    }

    #[test]
    fn weight_system_rejects_bad_basis() {
        let v = hexagon_config();
        // Wrong shape.
        assert!(weight_system(&v, Some(IntMatrix::from_i64(&[&[1], &[0]]))).is_err());
        // In-kernel but not saturated: doubled basis vector.
        let doubled =
            IntMatrix::from_i64(&[&[2, 0], &[0, 1], &[-2, -1], &[2, 0], &[0, 1], &[-2, -1]]);
        assert!(weight_system(&v, Some(doubled)).is_err());
        // Not in the kernel at all.
        let off = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0], &[0, 0], &[0, 0]]);
        assert!(weight_system(&v, Some(off)).is_err());
    }

    #[test]
    fn reduced_polytope_merges_parallel_slabs() {
        let p = ConicPolytope {
            ambient_dim: 1,
            facets: vec![
                Facet { functional: vec![bi(1)], lower: bi(-3), upper: bi(2), circuit: vec![0] },
                Facet { functional: vec![bi(-1)], lower: bi(-1), upper: bi(4), circuit: vec![1] },
            ],
        };
        let r = p.reduced();
        assert_eq!(r.facets.len(), 1);
        assert_eq!(r.facets[0].functional, vec![bi(1)]);
        assert_eq!((r.facets[0].lower.clone(), r.facets[0].upper.clone()), (bi(-3), bi(1)));
    }
}
