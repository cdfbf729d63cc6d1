//! Dense two-phase simplex over exact rationals with Bland's pivot rule.
//!
//! Every variable is free; internally each is split into a difference of two
//! nonnegative parts. Sizes here are desk scale (tens of variables), so the
//! tableau is kept dense.

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn is_satisfied(&self, x: &[BigRational]) -> bool {
        let lhs: BigRational = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, v)| a * v)
            .fold(BigRational::zero(), |s, t| s + t);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Maximize `objective · x` subject to the constraints; `x` is free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[row] = &self.rhs[row] / &p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
            self.rhs[r] = &self.rhs[r] - &f * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for `cost` restricted to `allowed` columns.
    /// Returns false when the objective is unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> Result<bool> {
        let cols = cost.len();
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > 100_000 {
                return Err(Error::Solver("simplex iteration limit".into()));
            }
            let mut entering = None;
            for j in 0..cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !cost[bv].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[bv] * &self.rows[i][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
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
            }
            match leaving {
                None => return Ok(false),
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &cost[b] * v)
            .fold(BigRational::zero(), |s, t| s + t)
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![BigRational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, c: Constraint) {
        debug_assert_eq!(c.coeffs.len(), self.num_vars);
        self.constraints.push(c);
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let nv = self.num_vars;
        let m = self.constraints.len();
        // columns: x+ (nv), x- (nv), slack/surplus (one per inequality), artificials
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        for c in &self.constraints {
            let flip = c.rhs.is_negative();
            let coeffs: Vec<BigRational> = if flip {
                c.coeffs.iter().map(|a| -a).collect()
            } else {
                c.coeffs.clone()
            };
            let rel = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let mut row: Vec<BigRational> = coeffs.clone();
            row.extend(coeffs.iter().map(|a| -a));
            rows.push(row);
            rhs.push(c.rhs.abs());
            relations.push(rel);
        }
        let n_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = relations.iter().filter(|r| **r != Relation::Le).count();
        let slack_start = 2 * nv;
        let art_start = slack_start + n_slack;
        let cols = art_start + n_art;
        let mut basis = vec![0usize; m];
        let (mut s, mut a) = (slack_start, art_start);
        for (i, rel) in relations.iter().enumerate() {
            rows[i].resize(cols, BigRational::zero());
            match rel {
                Relation::Le => {
                    rows[i][s] = BigRational::one();
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    rows[i][s] = -BigRational::one();
                    s += 1;
                    rows[i][a] = BigRational::one();
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    rows[i][a] = BigRational::one();
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        let mut t = Tableau { rows, rhs, basis };

        if n_art > 0 {
            let mut cost = vec![BigRational::zero(); cols];
            for c in cost.iter_mut().skip(art_start) {
                *c = -BigRational::one();
            }
            let allowed = vec![true; cols];
            if !t.optimize(&cost, &allowed)? {
                return Err(Error::Solver("phase one unbounded".into()));
            }
            if t.objective_value(&cost).is_negative() {
                return Ok(LpOutcome::Infeasible);
            }
            // drive zero-level artificials out of the basis; drop redundant rows
            let mut i = 0;
            while i < t.rows.len() {
                if t.basis[i] >= art_start {
                    match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                        Some(j) => {
                            t.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            t.rows.remove(i);
                            t.rhs.remove(i);
                            t.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        let mut cost = vec![BigRational::zero(); cols];
        for j in 0..nv {
            cost[j] = self.objective[j].clone();
            cost[nv + j] = -self.objective[j].clone();
        }
        let allowed: Vec<bool> = (0..cols).map(|j| j < art_start).collect();
        if !t.optimize(&cost, &allowed)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut full = vec![BigRational::zero(); cols];
        for (i, &b) in t.basis.iter().enumerate() {
            full[b] = t.rhs[i].clone();
        }
        let x: Vec<BigRational> = (0..nv).map(|j| &full[j] - &full[nv + j]).collect();
        for c in &self.constraints {
            if !c.is_satisfied(&x) {
                return Err(Error::Solver("optimal point violates a constraint".into()));
            }
        }
        let value = self
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .fold(BigRational::zero(), |s, t| s + t);
        Ok(LpOutcome::Optimal { x, value })
    }
}

/// Finds a point with `eq · x = 0` for every equality form and `s · x > 0` for
/// every strict form, by maximizing an auxiliary slack `t ≤ 1` with
/// `s · x ≥ t`. Coordinate `pin`, when given, is fixed to zero.
pub fn strict_feasible_point(
    num_vars: usize,
    equalities: &[Vec<BigRational>],
    strict: &[Vec<BigRational>],
    pin: Option<usize>,
) -> Result<Option<Vec<BigRational>>> {
    let total = num_vars + 1;
    let slack = num_vars;
    let mut lp = LinearProgram::new(total);
    lp.objective[slack] = BigRational::one();
    let widen = |form: &[BigRational]| {
        let mut v = form.to_vec();
        v.push(BigRational::zero());
        v
    };
    for e in equalities {
        lp.add(Constraint::new(widen(e), Relation::Eq, BigRational::zero()));
    }
    for s in strict {
        let mut v = widen(s);
        v[slack] = -BigRational::one();
        lp.add(Constraint::new(v, Relation::Ge, BigRational::zero()));
    }
    let mut cap = vec![BigRational::zero(); total];
    cap[slack] = BigRational::one();
    lp.add(Constraint::new(cap, Relation::Le, BigRational::one()));
    if let Some(p) = pin {
        let mut v = vec![BigRational::zero(); total];
        v[p] = BigRational::one();
        lp.add(Constraint::new(v, Relation::Eq, BigRational::zero()));
    }
    match lp.solve()? {
        LpOutcome::Optimal { mut x, value } => {
            if strict.is_empty() || value.is_positive() {
                x.truncate(num_vars);
                Ok(Some(x))
            } else {
                Ok(None)
            }
        }
        LpOutcome::Infeasible => Err(Error::Solver("origin should always be feasible".into())),
        LpOutcome::Unbounded => Err(Error::Solver("slack is capped; cannot be unbounded".into())),
    }
}
