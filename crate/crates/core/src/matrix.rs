//! Dense integer matrices with exact arithmetic: Smith normal form with
//! unimodular transforms, saturated kernel bases, ranks and minor gcds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("rows of unequal length".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for literals in tests and small fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect();
        IntMatrix { rows: rows.len(), cols: rows.first().map_or(0, |r| r.len()), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Matrix whose columns are the listed columns of `self`, in order.
    pub fn column_submatrix(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = m.get(r, c) + a * other.get(k, c);
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) + q * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) + q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form `U * M * W = D` with unimodular `U`, `W`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    /// The full diagonal of length min(rows, cols): invariant factors
    /// s_1 | s_2 | ... followed by zeros, all nonnegative.
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

/// Smith normal form by Euclidean pivoting.
///
/// Pivot selection is deterministic: among nonzero entries of the trailing
/// submatrix, the one of smallest absolute value, ties broken by row then
/// column. Each elimination uses truncated division, so residues shrink
/// strictly and the loop terminates.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut w = IntMatrix::identity(m.cols);
    let steps = m.rows.min(m.cols);

    for p in 0..steps {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for r in p..a.rows {
                for c in p..a.cols {
                    if a.get(r, c).is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((br, bc)) => a.get(r, c).abs() < a.get(br, bc).abs(),
                    };
                    if better {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                break 'pivot; // trailing submatrix is zero
            };
            a.swap_rows(p, pr);
            u.swap_rows(p, pr);
            a.swap_cols(p, pc);
            w.swap_cols(p, pc);

            let mut clean = true;
            for r in p + 1..a.rows {
                if a.get(r, p).is_zero() {
                    continue;
                }
                let q = -(a.get(r, p) / a.get(p, p));
                a.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !a.get(r, p).is_zero() {
                    clean = false;
                }
            }
            for c in p + 1..a.cols {
                if a.get(p, c).is_zero() {
                    continue;
                }
                let q = -(a.get(p, c) / a.get(p, p));
                a.add_col_multiple(c, p, &q);
                w.add_col_multiple(c, p, &q);
                if !a.get(p, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Row and column are clear; force the pivot to divide the rest.
            for r in p + 1..a.rows {
                for c in p + 1..a.cols {
                    if !a.get(r, c).mod_floor(a.get(p, p)).is_zero() {
                        let one = BigInt::one();
                        a.add_row_multiple(p, r, &one);
                        u.add_row_multiple(p, r, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }

    for p in 0..steps {
        if a.get(p, p).is_negative() {
            a.negate_row(p);
            u.negate_row(p);
        }
    }

    let diagonal = (0..steps).map(|p| a.get(p, p).clone()).collect();
    SnfResult { diagonal, left: u, right: w }
}

/// gcd of all i-by-i minors; 1 for i = 0, 0 past the rank or the dimensions.
///
/// Computed as the product s_1 ... s_i of invariant factors, which equals
/// the minor gcd; explicit minor enumeration is kept to the test oracles.
pub fn minor_gcd(m: &IntMatrix, i: usize) -> BigInt {
    if i == 0 {
        return BigInt::one();
    }
    if i > m.rows.min(m.cols) {
        return BigInt::zero();
    }
    let snf = smith_normal_form(m);
    if i > snf.rank() {
        return BigInt::zero();
    }
    snf.diagonal[..i].iter().product()
}

/// Columns form a basis of the saturated lattice ker(M) ∩ Z^cols.
///
/// Taken from the right transform of the Smith normal form, so the result
/// is deterministic for a given matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let free: Vec<usize> = (r..m.cols).collect();
    snf.right.column_submatrix(&free)
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, pr);
        for r in row + 1..a.rows {
            for c in col + 1..a.cols {
                let v = (a.get(row, col) * a.get(r, c) - a.get(r, col) * a.get(row, c)) / &prev;
                a.set(r, c, v);
            }
            a.set(r, col, BigInt::zero());
        }
        prev = a.get(row, col).clone();
        row += 1;
    }
    row
}

/// Exact determinant of a square matrix by Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant needs a square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            return BigInt::zero();
        };
        if pr != col {
            a.swap_rows(col, pr);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let v = (a.get(col, col) * a.get(r, c) - a.get(r, col) * a.get(col, c)) / &prev;
                a.set(r, c, v);
            }
            a.set(r, col, BigInt::zero());
        }
        prev = a.get(col, col).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// gcd of a slice, taken componentwise; 0 for an empty slice.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}
