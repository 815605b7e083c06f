//! Dense two-phase simplex with Bland's anti-cycling rule, generic over an
//! exact rational or floating-point scalar.
//!
//! Every constraint row receives an artificial column, so the final
//! tableau carries `B^{-1}` explicitly and the dual solution can be read
//! off the reduced costs of the artificial columns.

use num_traits::Signed;

use crate::rational::Rat;
use crate::{Error, Result};

use super::{LinearProgram, LpStatus, Relation};

/// Scalar field the simplex runs over. `Rat` gives exact pivoting; `f64`
/// uses a fixed tolerance and is reserved for large flagged experiments.
pub trait Scalar: Clone + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Strictly positive beyond tolerance.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond tolerance.
    fn is_neg(&self) -> bool;
    fn approx(&self) -> f64;
}

impl Scalar for Rat {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn approx(&self) -> f64 {
        crate::rational::rat_to_f64(self)
    }
}

const F64_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rat(r: &Rat) -> Self {
        crate::rational::rat_to_f64(r)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
    fn approx(&self) -> f64 {
        *self
    }
}

/// Solver result. At `Optimal`, the primal point is feasible, the dual
/// multipliers are sign-feasible, and both objective values agree (exactly,
/// for `Rat`).
#[derive(Debug, Clone)]
pub struct SimplexOutcome<T> {
    pub status: LpStatus,
    pub value: Option<T>,
    /// Structural variable values at the optimum.
    pub primal: Vec<T>,
    /// One multiplier per constraint (nonnegative on `Le` rows).
    pub dual: Vec<T>,
    pub iterations: usize,
}

struct Tableau<T> {
    cols: usize,
    rows: Vec<Vec<T>>, // each row: cols coefficients then rhs
    rhs: Vec<T>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    obj: Vec<T>,  // reduced costs z_j - c_j
    objval: T,
    iterations: usize,
}

const MAX_ITERATIONS: usize = 2_000_000;

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x = x.div(&piv);
        }
        self.rhs[row] = self.rhs[row].div(&piv);
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor == T::zero() {
                continue;
            }
            for c in 0..self.cols {
                let delta = factor.mul(&self.rows[row][c]);
                self.rows[r][c] = self.rows[r][c].sub(&delta);
            }
            self.rhs[r] = self.rhs[r].sub(&factor.mul(&self.rhs[row]));
        }
        let factor = self.obj[col].clone();
        if factor != T::zero() {
            for c in 0..self.cols {
                let delta = factor.mul(&self.rows[row][c]);
                self.obj[c] = self.obj[c].sub(&delta);
            }
            self.objval = self.objval.sub(&factor.mul(&self.rhs[row]));
        }
        self.in_basis[self.basis[row]] = false;
        self.in_basis[col] = true;
        self.basis[row] = col;
    }

    /// Recomputes the reduced-cost row for the cost vector `costs`
    /// (maximization) from the current basis.
    fn load_objective(&mut self, costs: &[T]) {
        let mut obj = vec![T::zero(); self.cols];
        let mut val = T::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if *cb == T::zero() {
                continue;
            }
            for c in 0..self.cols {
                obj[c] = obj[c].add(&cb.mul(&self.rows[r][c]));
            }
            val = val.add(&cb.mul(&self.rhs[r]));
        }
        for c in 0..self.cols {
            obj[c] = obj[c].sub(&costs[c]);
        }
        self.obj = obj;
        self.objval = val;
    }

    /// Bland's rule: enter the lowest-index improving column, leave on the
    /// minimum ratio with ties broken by lowest basis variable index.
    fn run(&mut self, blocked: &[bool]) -> Result<LpStatus> {
        loop {
            self.iterations += 1;
            if self.iterations > MAX_ITERATIONS {
                return Err(Error::NotApplicable(
                    "simplex iteration limit exceeded".into(),
                ));
            }
            let entering = (0..self.cols)
                .find(|&j| !blocked[j] && !self.in_basis[j] && self.obj[j].is_neg());
            let Some(j) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_pos() {
                    continue;
                }
                let ratio = self.rhs[r].div(&self.rows[r][j]);
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            self.pivot(r, j);
        }
    }
}

pub fn solve<T: Scalar>(lp: &LinearProgram) -> Result<SimplexOutcome<T>> {
    lp.validate()?;
    let m = lp.constraints.len();
    let nv = lp.num_vars;
    let n_slack: usize = lp
        .constraints
        .iter()
        .filter(|c| matches!(c.rel, Relation::Le))
        .count();
    let cols = nv + n_slack + m; // structural, slacks, artificials
    let art0 = nv + n_slack;

    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    let mut slack_idx = 0usize;
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![T::zero(); cols];
        for (v, coeff) in con.form.coeffs.iter().enumerate() {
            row[v] = T::from_rat(coeff);
        }
        // Fold the form's constant term into the right-hand side.
        let mut b = T::from_rat(&con.rhs).sub(&T::from_rat(&con.form.constant));
        if matches!(con.rel, Relation::Le) {
            row[nv + slack_idx] = T::one();
            slack_idx += 1;
        }
        if b.is_neg() {
            for x in row.iter_mut() {
                *x = x.neg();
            }
            b = b.neg();
            flipped[i] = true;
        }
        row[art0 + i] = T::one();
        rows.push(row);
        rhs.push(b);
    }

    // Initial basis: the slack where it has coefficient +1, else the
    // artificial of the row.
    let mut basis = Vec::with_capacity(m);
    let mut in_basis = vec![false; cols];
    let mut slack_idx = 0usize;
    let mut need_phase1 = false;
    for (i, con) in lp.constraints.iter().enumerate() {
        let b = if matches!(con.rel, Relation::Le) && !flipped[i] {
            nv + slack_idx
        } else {
            need_phase1 = true;
            art0 + i
        };
        if matches!(con.rel, Relation::Le) {
            slack_idx += 1;
        }
        basis.push(b);
        in_basis[b] = true;
    }

    let mut tab = Tableau {
        cols,
        rows,
        rhs,
        basis,
        in_basis,
        obj: vec![T::zero(); cols],
        objval: T::zero(),
        iterations: 0,
    };

    let artificial: Vec<bool> = (0..cols).map(|j| j >= art0).collect();

    if need_phase1 {
        // Minimize the sum of artificials (as maximize the negation).
        let mut costs = vec![T::zero(); cols];
        for c in costs.iter_mut().skip(art0) {
            *c = T::one().neg();
        }
        tab.load_objective(&costs);
        let status = tab.run(&vec![false; cols])?;
        debug_assert!(matches!(status, LpStatus::Optimal));
        if tab.objval.is_neg() {
            return Ok(SimplexOutcome {
                status: LpStatus::Infeasible,
                value: None,
                primal: vec![],
                dual: vec![],
                iterations: tab.iterations,
            });
        }
        // Drive basic artificials out where possible; rows where every
        // non-artificial coefficient vanished are redundant and keep their
        // artificial basic at zero.
        for r in 0..m {
            if tab.basis[r] >= art0 {
                if let Some(j) = (0..art0).find(|&j| {
                    !tab.in_basis[j] && (tab.rows[r][j].is_pos() || tab.rows[r][j].is_neg())
                }) {
                    tab.pivot(r, j);
                }
            }
        }
    }

    let mut costs = vec![T::zero(); cols];
    for (v, coeff) in lp.objective.coeffs.iter().enumerate() {
        costs[v] = T::from_rat(coeff);
    }
    tab.load_objective(&costs);
    let status = tab.run(&artificial)?;
    if matches!(status, LpStatus::Unbounded) {
        return Ok(SimplexOutcome {
            status,
            value: None,
            primal: vec![],
            dual: vec![],
            iterations: tab.iterations,
        });
    }

    let mut primal = vec![T::zero(); nv];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nv {
            primal[b] = tab.rhs[r].clone();
        }
    }
    // Reduced cost of artificial i equals c_B B^{-1} e_i, the multiplier of
    // row i; undo the sign normalization of flipped rows.
    let mut dual = Vec::with_capacity(m);
    for i in 0..m {
        let y = tab.obj[art0 + i].clone();
        dual.push(if flipped[i] { y.neg() } else { y });
    }
    let value = tab.objval.add(&T::from_rat(&lp.objective.constant));

    Ok(SimplexOutcome {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        dual,
        iterations: tab.iterations,
    })
}

/// Approximate objective value helper for reports.
pub fn outcome_value_f64<T: Scalar>(out: &SimplexOutcome<T>) -> Option<f64> {
    out.value.as_ref().map(|v| v.approx())
}
