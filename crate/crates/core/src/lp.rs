//! Exact rational linear programming: feasibility of systems with strict
//! and non-strict constraints, linear optimization, cone membership, and
//! exact linear solves. All pivoting is done over arbitrary-precision
//! rationals; Bland's rule guarantees termination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub type Rat = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

/// A single linear constraint `coeffs . x  rel  rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn from_int(coeffs: &[BigInt], rel: Rel, rhs: BigInt) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
            rel,
            rhs: Rat::from_integer(rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vec<Rat>, value: Rat },
}

/// Row-reduced simplex tableau over exact rationals.
struct Tableau {
    /// m rows of length nvars + 1; the final entry of each row is the rhs.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    nvars: usize,
    banned: Vec<bool>,
}

enum MaxOutcome {
    Optimal(Rat),
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.nvars]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for j in 0..=self.nvars {
                let delta = &factor * &self.rows[r][j];
                self.rows[i][j] = &self.rows[i][j] - delta;
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `cost . y` over the current feasible region with Bland's
    /// anti-cycling rule. Leaves the tableau at the optimal basis.
    fn maximize(&mut self, cost: &[Rat]) -> MaxOutcome {
        loop {
            // Reduced costs z_j = cost_j - cost_B . column_j.
            let mut entering = None;
            for j in 0..self.nvars {
                if self.banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut z = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() {
                        z -= &cost[b] * &self.rows[i][j];
                    }
                }
                if z.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                let value = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| &cost[b] * self.rhs(i))
                    .fold(Rat::zero(), |a, v| a + v);
                return MaxOutcome::Optimal(value);
            };
            // Ratio test; ties broken by smallest basis index (Bland).
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.rows[i][c];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return MaxOutcome::Unbounded;
            };
            self.pivot(r, c);
        }
    }

    fn solution(&self) -> Vec<Rat> {
        let mut y = vec![Rat::zero(); self.nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs(i).clone();
        }
        y
    }
}

/// Standard-form problem: maximize cost . y with A y = b, y >= 0, where the
/// rows came from the constraint translation below.
struct StandardForm {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    /// number of structural (non-artificial) variables
    nstruct: usize,
}

impl StandardForm {
    /// Two-phase solve. Returns the tableau at a feasible basis, or None.
    fn phase_one(self) -> Option<Tableau> {
        let m = self.rows.len();
        let nall = self.nstruct + m;
        let mut rows = Vec::with_capacity(m);
        for (i, mut row) in self.rows.into_iter().enumerate() {
            let mut rhs = self.rhs[i].clone();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
            }
            let mut full = row;
            full.resize(nall, Rat::zero());
            full[self.nstruct + i] = Rat::one();
            full.push(rhs);
            rows.push(full);
        }
        let mut t = Tableau {
            rows,
            basis: (self.nstruct..nall).collect(),
            nvars: nall,
            banned: vec![false; nall],
        };
        let mut cost = vec![Rat::zero(); nall];
        for c in cost.iter_mut().skip(self.nstruct) {
            *c = -Rat::one();
        }
        match t.maximize(&cost) {
            MaxOutcome::Optimal(v) if v.is_zero() => {}
            _ => return None,
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.basis.len() {
            if t.basis[i] >= self.nstruct {
                if let Some(j) = (0..self.nstruct).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j);
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for b in t.banned.iter_mut().skip(self.nstruct) {
            *b = true;
        }
        Some(t)
    }
}

/// Internal translation of free-variable constraints into standard form.
///
/// Free variable x_j becomes p_j - q_j (columns 2j, 2j+1). When `eps` is
/// set, one extra nonnegative column (index 2n) is added, every strict
/// inequality is tightened by it, and the cap eps <= 1 is appended.
fn build_standard(constraints: &[Constraint], n: usize, eps: bool) -> Result<StandardForm> {
    let eps_col = 2 * n;
    let nstruct = if eps { 2 * n + 1 } else { 2 * n };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let push = |coeffs: &[Rat], scale: &Rat, eps_coeff: Rat, slack: Rat, b: Rat, rows: &mut Vec<(Vec<Rat>, Rat)>| {
        let mut row = vec![Rat::zero(); nstruct];
        for (j, c) in coeffs.iter().enumerate() {
            let v = c * scale;
            row[2 * j] = v.clone();
            row[2 * j + 1] = -v;
        }
        if eps {
            row[eps_col] = eps_coeff;
        }
        // The slack sign rides along as a trailing marker column until the
        // slack block is laid out below.
        row.push(slack);
        rows.push((row, b));
    };
    let one = Rat::one();
    let neg = -Rat::one();
    let mut raw = Vec::new();
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::Invalid("constraint arity mismatch".into()));
        }
        match c.rel {
            Rel::Le => push(&c.coeffs, &one, Rat::zero(), one.clone(), c.rhs.clone(), &mut raw),
            Rel::Ge => push(&c.coeffs, &neg, Rat::zero(), one.clone(), -c.rhs.clone(), &mut raw),
            Rel::Eq => push(&c.coeffs, &one, Rat::zero(), Rat::zero(), c.rhs.clone(), &mut raw),
            Rel::Lt => {
                if !eps {
                    return Err(Error::Invalid("strict constraint in a closed-only solve".into()));
                }
                push(&c.coeffs, &one, one.clone(), one.clone(), c.rhs.clone(), &mut raw)
            }
            Rel::Gt => {
                if !eps {
                    return Err(Error::Invalid("strict constraint in a closed-only solve".into()));
                }
                push(&c.coeffs, &neg, one.clone(), one.clone(), -c.rhs.clone(), &mut raw)
            }
        }
    }
    if eps {
        // eps <= 1 keeps the margin objective bounded.
        let zeros = vec![Rat::zero(); n];
        push(&zeros, &one, one.clone(), one.clone(), one.clone(), &mut raw);
    }
    // Slack columns: one per inequality row, appended after the structural
    // block so every row becomes an equality.
    let slack_count = raw.iter().filter(|(row, _)| !row[nstruct].is_zero()).count();
    let mut slack_idx = 0;
    for (mut row, b) in raw {
        let slack_sign = row.pop().unwrap();
        let has_slack = !slack_sign.is_zero();
        row.resize(nstruct + slack_count, Rat::zero());
        if has_slack {
            row[nstruct + slack_idx] = slack_sign;
            slack_idx += 1;
        }
        rows.push(row);
        rhs.push(b);
    }
    Ok(StandardForm { rows, rhs, nstruct: nstruct + slack_count })
}

fn recover_point(y: &[Rat], n: usize) -> Vec<Rat> {
    (0..n).map(|j| &y[2 * j] - &y[2 * j + 1]).collect()
}

/// Decide feasibility of a mixed strict/non-strict rational system over
/// free variables; returns a satisfying rational point.
///
/// Strict inequalities are handled exactly: a margin variable is added to
/// each of them and maximized, and the system is declared feasible only if
/// the optimal margin is positive.
pub fn rational_feasible(constraints: &[Constraint]) -> Result<Option<Vec<Rat>>> {
    let n = constraints.iter().map(|c| c.coeffs.len()).max().unwrap_or(0);
    let strict = constraints.iter().any(|c| matches!(c.rel, Rel::Lt | Rel::Gt));
    let sf = build_standard(constraints, n, strict)?;
    let nstruct = sf.nstruct;
    let Some(mut t) = sf.phase_one() else {
        return Ok(None);
    };
    if !strict {
        let y = t.solution();
        return Ok(Some(recover_point(&y, n)));
    }
    let mut cost = vec![Rat::zero(); t.nvars];
    cost[2 * n] = Rat::one();
    match t.maximize(&cost) {
        MaxOutcome::Optimal(v) if v.is_positive() => {
            let y = t.solution();
            Ok(Some(recover_point(&y, n)))
        }
        MaxOutcome::Optimal(_) => Ok(None),
        // Unreachable with the eps <= 1 cap; treat defensively.
        MaxOutcome::Unbounded => {
            debug_assert!(nstruct > 0);
            Ok(None)
        }
    }
}

/// Maximize (or minimize) a linear objective over a closed system.
pub fn optimize(objective: &[Rat], maximize: bool, constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = objective.len();
    let sf = build_standard(constraints, n, false)?;
    let Some(mut t) = sf.phase_one() else {
        return Ok(LpOutcome::Infeasible);
    };
    let mut cost = vec![Rat::zero(); t.nvars];
    for j in 0..n {
        let c = if maximize { objective[j].clone() } else { -objective[j].clone() };
        cost[2 * j] = c.clone();
        cost[2 * j + 1] = -c;
    }
    match t.maximize(&cost) {
        MaxOutcome::Unbounded => Ok(LpOutcome::Unbounded),
        MaxOutcome::Optimal(v) => {
            let y = t.solution();
            let value = if maximize { v } else { -v };
            Ok(LpOutcome::Optimal { point: recover_point(&y, n), value })
        }
    }
}

/// Nonnegative coefficients expressing `target` in the cone spanned by
/// `generators`, if any exist.
pub fn cone_membership(generators: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<Rat>> {
    let k = generators.len();
    let d = target.len();
    let mut constraints = Vec::with_capacity(d + k);
    for row in 0..d {
        let coeffs: Vec<Rat> =
            generators.iter().map(|g| Rat::from_integer(g[row].clone())).collect();
        constraints.push(Constraint::new(coeffs, Rel::Eq, Rat::from_integer(target[row].clone())));
    }
    for i in 0..k {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs[i] = Rat::one();
        constraints.push(Constraint::new(coeffs, Rel::Ge, Rat::zero()));
    }
    rational_feasible(&constraints).expect("closed system never errors").map(|p| p[..k].to_vec())
}

/// Exact solution of `a x = rhs` by Gauss elimination over the rationals;
/// free variables are set to zero. None if the system is inconsistent.
pub fn solve_rational_system(a: &IntMatrix, rhs: &[BigInt]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), rhs.len(), "dimension mismatch in linear solve");
    let m = a.rows();
    let n = a.cols();
    let mut aug: Vec<Vec<Rat>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rat> =
                (0..n).map(|c| Rat::from_integer(a.get(r, c).clone())).collect();
            row.push(Rat::from_integer(rhs[r].clone()));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(pr) = (row..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, pr);
        let piv = aug[row][col].clone();
        for v in aug[row].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = aug[row].clone();
        for (r, target) in aug.iter_mut().enumerate() {
            if r == row || target[col].is_zero() {
                continue;
            }
            let f = target[col].clone();
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                let delta = &f * p;
                *t = &*t - delta;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for &(r, c) in &pivots {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}
