//! Primitive integer vector configurations and their linear matroids:
//! rank, circuit enumeration with signed circuit vectors, strong
//! convexity, and Gale duality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lp::{rational_feasible, Constraint, Rat, Rel};
use crate::matrix::{self, IntMatrix};

/// Cap on the column count of exhaustive enumerations (circuits, subset
/// sums). Overridable per call; the cap guards against accidental blowup,
/// not against deliberate large runs.
pub const DEFAULT_ENUM_LIMIT: usize = 20;

/// A configuration of primitive nonzero integer vectors spanning a
/// strongly convex cone. The vectors are the columns of `matrix()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorConfig {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

/// A circuit of the linear matroid: minimal dependent column set, plus the
/// primitive kernel vector supported exactly on it. The vector's sign is
/// normalized so the entry at the smallest support index is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidCircuit {
    pub support: Vec<usize>,
    pub vector: Vec<BigInt>,
}

/// True iff no nonzero nonnegative vector lies in the kernel of the
/// column matrix, i.e. the cone spanned by the columns is strongly convex.
pub fn is_strongly_convex(dim: usize, vectors: &[Vec<BigInt>]) -> bool {
    let n = vectors.len();
    if n == 0 {
        return true;
    }
    let mut constraints = Vec::with_capacity(dim + n + 1);
    for row in 0..dim {
        let coeffs: Vec<Rat> =
            vectors.iter().map(|v| Rat::from_integer(v[row].clone())).collect();
        constraints.push(Constraint::new(coeffs, Rel::Eq, Rat::zero()));
    }
    for i in 0..n {
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[i] = Rat::one();
        constraints.push(Constraint::new(coeffs, Rel::Ge, Rat::zero()));
    }
    constraints.push(Constraint::new(vec![Rat::one(); n], Rel::Eq, Rat::one()));
    rational_feasible(&constraints).expect("closed system").is_none()
}

impl VectorConfig {
    pub fn new(dim: usize, vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Invalid(format!(
                    "vector {} has length {}, expected {dim}",
                    i + 1,
                    v.len()
                )));
            }
            if v.iter().all(|x| x.is_zero()) {
                return Err(Error::Invalid(format!("vector {} is zero", i + 1)));
            }
            if !matrix::gcd_all(v).is_one() {
                return Err(Error::Invalid(format!("vector {} is not primitive", i + 1)));
            }
        }
        if !is_strongly_convex(dim, &vectors) {
            return Err(Error::Invalid("configuration is not strongly convex".into()));
        }
        Ok(VectorConfig { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[BigInt] {
        &self.vectors[i]
    }

    /// The dim-by-n matrix whose columns are the vectors.
    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.dim, self.vectors.len());
        for (c, v) in self.vectors.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    /// Matroid rank of a set of column indices.
    pub fn matroid_rank(&self, subset: &[usize]) -> usize {
        matrix::rank(&self.matrix().column_submatrix(subset))
    }

    pub fn rank(&self) -> usize {
        matrix::rank(&self.matrix())
    }

    /// All circuits, sorted lexicographically by support.
    ///
    /// Enumerates independent sets in increasing size, extending each by a
    /// larger index; a dependent extension is a circuit exactly when every
    /// one-element deletion is independent. Errors past the column cap.
    pub fn circuits(&self, limit: usize) -> Result<Vec<MatroidCircuit>> {
        let n = self.vectors.len();
        if n > limit {
            return Err(Error::Limit { required: n, limit });
        }
        let full = self.matrix();
        let r = matrix::rank(&full);
        let mut circuits = Vec::new();
        let mut indep: HashSet<Vec<usize>> = HashSet::new();
        indep.insert(Vec::new());
        for _size in 0..=r {
            let mut next: HashSet<Vec<usize>> = HashSet::new();
            for set in &indep {
                let start = set.last().map_or(0, |&x| x + 1);
                for e in start..n {
                    let mut s = set.clone();
                    s.push(e);
                    if matrix::rank(&full.column_submatrix(&s)) == s.len() {
                        next.insert(s);
                        continue;
                    }
                    // Dependent: minimal iff all one-element deletions are
                    // independent. Deleting e gives `set` itself.
                    let minimal = s.iter().all(|&f| {
                        f == e || {
                            let rest: Vec<usize> = s.iter().copied().filter(|&g| g != f).collect();
                            indep.contains(&rest)
                        }
                    });
                    if minimal {
                        circuits.push(self.circuit_from_support(&full, s));
                    }
                }
            }
            indep = next;
        }
        circuits.sort_by(|a, b| a.support.cmp(&b.support));
        Ok(circuits)
    }

    fn circuit_from_support(&self, full: &IntMatrix, support: Vec<usize>) -> MatroidCircuit {
        let sub = full.column_submatrix(&support);
        let ker = matrix::kernel_basis(&sub);
        assert_eq!(ker.cols(), 1, "a circuit has a one-dimensional kernel");
        let mut vector = vec![BigInt::zero(); self.vectors.len()];
        for (pos, &col) in support.iter().enumerate() {
            vector[col] = ker.get(pos, 0).clone();
        }
        let lead = &vector[support[0]];
        assert!(!lead.is_zero(), "circuit vector vanishes on its support");
        if lead.is_negative() {
            for x in vector.iter_mut() {
                *x = -&*x;
            }
        }
        debug_assert!(matrix::gcd_all(&vector).is_one());
        MatroidCircuit { support, vector }
    }

    /// Kernel basis of the column matrix (deterministic), as a matrix whose
    /// columns are the basis vectors.
    pub fn kernel(&self) -> IntMatrix {
        matrix::kernel_basis(&self.matrix())
    }

    /// Gale vectors: the i-th is row i of the kernel basis matrix, one per
    /// configuration vector, living in Z^(n - rank).
    pub fn gale_vectors(&self) -> Vec<Vec<BigInt>> {
        let k = self.kernel();
        (0..self.vectors.len()).map(|i| k.row(i)).collect()
    }
}
