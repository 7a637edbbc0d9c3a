//! Dense two-phase simplex with an exact-rational mode and a floating mode.
//!
//! Problems are stated with exact rational data. `solve` converts them to
//! the standard form `max cᵀx, A x (≤|=|≥) b, b ≥ 0, x ≥ 0`, runs phase 1 on
//! artificial variables and phase 2 on the real objective, and re-verifies
//! every optimal answer (primal feasibility, dual feasibility, zero duality
//! gap) before returning it. Pivoting is Dantzig's rule while the objective
//! improves and Bland's rule during degenerate stretches, which rules out
//! cycling.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Error)]
pub enum LpError {
    #[error("problem has {nonzeros} nonzeros, above the exact-mode cap of {cap}")]
    SizeCap { nonzeros: usize, cap: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("optimal answer failed re-verification: {0}")]
    CertificateFailed(String),

    #[error("malformed problem: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Linear program over exact rational data. Variables default to `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SolveMode {
    Exact,
    Float { tolerance: f64 },
}

impl SolveMode {
    pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-7;

    pub fn float() -> Self {
        SolveMode::Float {
            tolerance: Self::DEFAULT_FLOAT_TOLERANCE,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LpLimits {
    /// Constraint-matrix nonzeros allowed in exact mode.
    pub max_exact_nonzeros: usize,
    pub max_pivots: usize,
}

impl Default for LpLimits {
    fn default() -> Self {
        LpLimits {
            max_exact_nonzeros: 20_000,
            max_pivots: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of a solve. `dual[i]` prices constraint `i` so that, for an
/// optimal answer, `objective = Σ rhs_i · dual_i` plus bound terms; for a
/// maximisation `dual_i ≥ 0` on `≤` rows and `≤ 0` on `≥` rows, and the
/// signs flip for a minimisation.
#[derive(Clone, Debug)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    pub objective: Option<T>,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
pub enum Solution {
    Exact(LpOutcome<Rational>),
    Float(LpOutcome<f64>),
}

impl Solution {
    pub fn status(&self) -> LpStatus {
        match self {
            Solution::Exact(o) => o.status,
            Solution::Float(o) => o.status,
        }
    }

    pub fn objective_f64(&self) -> Option<f64> {
        match self {
            Solution::Exact(o) => o.objective.as_ref().map(rational::to_f64),
            Solution::Float(o) => o.objective,
        }
    }
}

impl LpProblem {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LpProblem {
            sense,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_objective(&mut self, var: usize, c: Rational) {
        self.objective[var] = c;
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_free(&mut self, var: usize) {
        self.set_bounds(var, None, None);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Adds a constraint from `(variable, coefficient)` pairs.
    pub fn add_sparse(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (j, c) in terms {
            coeffs[j] += c;
        }
        self.add_constraint(coeffs, relation, rhs);
    }

    pub fn nonzeros(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| c.coeffs.iter().filter(|v| !v.is_zero()).count())
            .sum()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::Malformed("no variables".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed(
                "bound vectors have the wrong length".into(),
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has width {} instead of {n}",
                    c.coeffs.len()
                )));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(LpError::Malformed(format!(
                        "variable {j} has lower > upper"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Writes the problem in CPLEX LP text format (coefficients as decimals).
    pub fn write_lp_format<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let num = |r: &Rational| format!("{}", rational::to_f64(r));
        let linear = |coeffs: &[Rational]| {
            let mut s = String::new();
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                s.push_str(&format!(" {sign} {} x{}", num(&c.abs()), j + 1));
            }
            if s.is_empty() {
                s.push_str(" 0 x1");
            }
            s
        };
        writeln!(w, "\\ generated by adeg")?;
        writeln!(
            w,
            "{}",
            match self.sense {
                Sense::Maximize => "Maximize",
                Sense::Minimize => "Minimize",
            }
        )?;
        writeln!(w, " obj:{}", linear(&self.objective))?;
        writeln!(w, "Subject To")?;
        for (i, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            writeln!(w, " c{}:{} {rel} {}", i + 1, linear(&c.coeffs), num(&c.rhs))?;
        }
        writeln!(w, "Bounds")?;
        for j in 0..self.num_vars() {
            match (&self.lower[j], &self.upper[j]) {
                (None, None) => writeln!(w, " x{} free", j + 1)?,
                (Some(l), None) => writeln!(w, " x{} >= {}", j + 1, num(l))?,
                (None, Some(u)) => writeln!(w, " -inf <= x{} <= {}", j + 1, num(u))?,
                (Some(l), Some(u)) => writeln!(w, " {} <= x{} <= {}", num(l), j + 1, num(u))?,
            }
        }
        writeln!(w, "End")
    }
}

/// Arithmetic needed by the tableau. Tolerances are ignored by exact types.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn zero_s() -> Self;
    fn one_s() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero_tol(&self, tol: f64) -> bool;
    fn is_pos(&self, tol: f64) -> bool;
    fn is_neg(&self, tol: f64) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self -= a * b`.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);
    fn cmp_val(&self, o: &Self) -> Ordering;
    /// Snap values within `tol` of zero to zero.
    fn clean(&mut self, _tol: f64) {}
}

impl Scalar for Rational {
    fn zero_s() -> Self {
        Zero::zero()
    }
    fn one_s() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
    fn is_zero_tol(&self, _: f64) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self, _: f64) -> bool {
        self.is_positive()
    }
    fn is_neg(&self, _: f64) -> bool {
        self.is_negative()
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
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

impl Scalar for f64 {
    fn zero_s() -> Self {
        0.0
    }
    fn one_s() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn is_pos(&self, tol: f64) -> bool {
        *self > tol
    }
    fn is_neg(&self, tol: f64) -> bool {
        *self < -tol
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
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn clean(&mut self, tol: f64) {
        if self.abs() < tol {
            *self = 0.0;
        }
    }
}

/// How an original variable is recovered from standard-form columns.
#[derive(Clone, Debug)]
struct VarMap {
    offset: Rational,
    /// `(standard column, coefficient ±1)`.
    parts: Vec<(usize, i8)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Standard form `max cᵀx, A x rel b, b ≥ 0, x ≥ 0` plus bookkeeping.
struct StandardForm {
    a: Vec<Vec<Rational>>,
    rel: Vec<Relation>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    /// Row `i` of the standard form was negated during normalisation.
    flipped: Vec<bool>,
    /// Number of rows coming from original constraints (the rest are bounds).
    original_rows: usize,
    vars: Vec<VarMap>,
}

fn standard_form(p: &LpProblem) -> StandardForm {
    let n = p.num_vars();
    let mut vars = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        match (&p.lower[j], &p.upper[j]) {
            (Some(l), u) => {
                vars.push(VarMap {
                    offset: l.clone(),
                    parts: vec![(ncols, 1)],
                });
                if let Some(u) = u {
                    bound_rows.push((ncols, u - l));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                vars.push(VarMap {
                    offset: u.clone(),
                    parts: vec![(ncols, -1)],
                });
                ncols += 1;
            }
            (None, None) => {
                vars.push(VarMap {
                    offset: Rational::zero(),
                    parts: vec![(ncols, 1), (ncols + 1, -1)],
                });
                ncols += 2;
            }
        }
    }
    let sign = match p.sense {
        Sense::Maximize => Rational::one(),
        Sense::Minimize => -Rational::one(),
    };
    let mut c = vec![Rational::zero(); ncols];
    for (j, vm) in vars.iter().enumerate() {
        for &(col, s) in &vm.parts {
            c[col] += &p.objective[j] * &sign * rational::int(s as i64);
        }
    }
    let mut a = Vec::new();
    let mut rel = Vec::new();
    let mut b = Vec::new();
    for con in &p.constraints {
        let mut row = vec![Rational::zero(); ncols];
        let mut rhs = con.rhs.clone();
        for (j, coef) in con.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            rhs -= coef * &vars[j].offset;
            for &(col, s) in &vars[j].parts {
                row[col] += coef * rational::int(s as i64);
            }
        }
        a.push(row);
        rel.push(con.relation);
        b.push(rhs);
    }
    let original_rows = a.len();
    for (col, ub) in bound_rows {
        let mut row = vec![Rational::zero(); ncols];
        row[col] = Rational::one();
        a.push(row);
        rel.push(Relation::Le);
        b.push(ub);
    }
    let mut flipped = vec![false; a.len()];
    for i in 0..a.len() {
        if b[i].is_negative() {
            flipped[i] = true;
            for v in &mut a[i] {
                *v = -&*v;
            }
            b[i] = -&b[i];
            rel[i] = match rel[i] {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    StandardForm {
        a,
        rel,
        b,
        c,
        flipped,
        original_rows,
        vars,
    }
}

struct Tableau<T: Scalar> {
    /// `m` rows of width `ncols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced costs `c_B B⁻¹ A_j − c_j`; last entry is the objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    /// Column that was the identity column of each row in the initial tableau.
    unit_col: Vec<usize>,
    ncols: usize,
    tol: f64,
    pivots: usize,
    max_pivots: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn build(sf: &StandardForm, tol: f64, max_pivots: usize) -> Self {
        let m = sf.a.len();
        let ns = sf.c.len();
        let mut kinds = vec![ColKind::Structural; ns];
        let mut extra: Vec<(usize, usize, i8, ColKind)> = Vec::new(); // (row, col, sign, kind)
        let mut unit_col = vec![0usize; m];
        let mut ncols = ns;
        for i in 0..m {
            match sf.rel[i] {
                Relation::Le => {
                    extra.push((i, ncols, 1, ColKind::Slack));
                    unit_col[i] = ncols;
                    ncols += 1;
                }
                Relation::Ge => {
                    extra.push((i, ncols, -1, ColKind::Slack));
                    ncols += 1;
                    extra.push((i, ncols, 1, ColKind::Artificial));
                    unit_col[i] = ncols;
                    ncols += 1;
                }
                Relation::Eq => {
                    extra.push((i, ncols, 1, ColKind::Artificial));
                    unit_col[i] = ncols;
                    ncols += 1;
                }
            }
        }
        kinds.resize(ncols, ColKind::Slack);
        let mut rows = vec![vec![T::zero_s(); ncols + 1]; m];
        for i in 0..m {
            for j in 0..ns {
                if !sf.a[i][j].is_zero() {
                    rows[i][j] = T::from_rational(&sf.a[i][j]);
                }
            }
            rows[i][ncols] = T::from_rational(&sf.b[i]);
        }
        for &(i, col, s, kind) in &extra {
            kinds[col] = kind;
            rows[i][col] = if s > 0 { T::one_s() } else { T::one_s().neg() };
        }
        Tableau {
            rows,
            obj: vec![T::zero_s(); ncols + 1],
            basis: unit_col.clone(),
            kinds,
            unit_col,
            ncols,
            tol,
            pivots: 0,
            max_pivots,
        }
    }

    /// Recompute the reduced-cost row for cost vector `cost` (length `ncols`).
    fn set_costs(&mut self, cost: &[T]) {
        let w = self.ncols + 1;
        let mut obj = vec![T::zero_s(); w];
        for j in 0..self.ncols {
            obj[j] = cost[j].neg();
        }
        for (i, &bcol) in self.basis.iter().enumerate() {
            let cb = &cost[bcol];
            if cb.is_zero_tol(0.0) {
                continue;
            }
            for j in 0..w {
                let v = &self.rows[i][j];
                if !v.is_zero_tol(0.0) {
                    let prod = cb.mul(v);
                    obj[j] = obj[j].add(&prod);
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.ncols + 1;
        let piv = self.rows[r][col].clone();
        let inv = T::one_s().div(&piv);
        let nz: Vec<usize> = (0..w)
            .filter(|&j| !self.rows[r][j].is_zero_tol(0.0))
            .collect();
        for &j in &nz {
            self.rows[r][j] = self.rows[r][j].mul(&inv);
        }
        self.rows[r][col] = T::one_s();
        let prow = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            if factor.is_zero_tol(0.0) {
                continue;
            }
            for &j in &nz {
                row[j].sub_mul_assign(&factor, &prow[j]);
                row[j].clean(self.tol * 1e-3);
            }
            row[col] = T::zero_s();
        }
        let factor = self.obj[col].clone();
        if !factor.is_zero_tol(0.0) {
            for &j in &nz {
                self.obj[j].sub_mul_assign(&factor, &prow[j]);
                self.obj[j].clean(self.tol * 1e-3);
            }
            self.obj[col] = T::zero_s();
        }
        self.rows[r] = prow;
        self.basis[r] = col;
        self.pivots += 1;
    }

    fn run(&mut self, allow_artificial: bool) -> Result<PhaseEnd, LpError> {
        let rhs = self.ncols;
        let mut bland = false;
        loop {
            if self.pivots >= self.max_pivots {
                return Err(LpError::NumericalFailure(format!(
                    "pivot limit of {} reached",
                    self.max_pivots
                )));
            }
            let eligible = |j: usize| allow_artificial || self.kinds[j] != ColKind::Artificial;
            let entering = if bland {
                (0..self.ncols).find(|&j| eligible(j) && self.obj[j].is_neg(self.tol))
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.ncols {
                    if eligible(j) && self.obj[j].is_neg(self.tol) {
                        match best {
                            Some(b) if self.obj[j].cmp_val(&self.obj[b]) != Ordering::Less => {}
                            _ => best = Some(j),
                        }
                    }
                }
                best
            };
            let Some(col) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_pos(self.tol) {
                    continue;
                }
                let ratio = self.rows[i][rhs].div(a);
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        let diff = ratio.sub(lr);
                        if diff.is_neg(self.tol) {
                            true
                        } else if diff.is_zero_tol(self.tol) {
                            self.basis[i] < self.basis[*li]
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            bland = ratio.is_zero_tol(self.tol);
            self.pivot(r, col);
        }
    }

    /// Pivot zero-valued artificials out of the basis where possible.
    fn evict_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if self.kinds[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            let mut best: Option<usize> = None;
            for j in 0..self.ncols {
                if self.kinds[j] == ColKind::Artificial || self.rows[r][j].is_zero_tol(self.tol) {
                    continue;
                }
                best = Some(j);
                break;
            }
            if let Some(j) = best {
                self.pivot(r, j);
            }
        }
    }
}

fn solve_generic<T: Scalar>(
    p: &LpProblem,
    tol: f64,
    limits: &LpLimits,
) -> Result<(LpOutcome<T>, StandardForm, Vec<T>), LpError> {
    let sf = standard_form(p);
    let mut tab: Tableau<T> = Tableau::build(&sf, tol, limits.max_pivots);
    let ncols = tab.ncols;

    let has_artificial = tab.kinds.contains(&ColKind::Artificial);
    if has_artificial {
        let cost: Vec<T> = tab
            .kinds
            .iter()
            .map(|k| {
                if *k == ColKind::Artificial {
                    T::one_s().neg()
                } else {
                    T::zero_s()
                }
            })
            .collect();
        tab.set_costs(&cost);
        match tab.run(true)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(LpError::NumericalFailure(
                    "phase 1 reported unbounded".into(),
                ))
            }
        }
        if tab.obj[ncols].is_neg(tol) {
            let out = LpOutcome {
                status: LpStatus::Infeasible,
                primal: vec![],
                dual: vec![],
                objective: None,
                pivots: tab.pivots,
            };
            return Ok((out, sf, vec![]));
        }
        tab.evict_artificials();
    }

    let mut cost = vec![T::zero_s(); ncols];
    for (j, c) in sf.c.iter().enumerate() {
        cost[j] = T::from_rational(c);
    }
    tab.set_costs(&cost);
    match tab.run(false)? {
        PhaseEnd::Unbounded => {
            let out = LpOutcome {
                status: LpStatus::Unbounded,
                primal: vec![],
                dual: vec![],
                objective: None,
                pivots: tab.pivots,
            };
            return Ok((out, sf, vec![]));
        }
        PhaseEnd::Optimal => {}
    }

    // Standard-form primal values.
    let ns = sf.c.len();
    let mut xs = vec![T::zero_s(); ns];
    for (i, &bcol) in tab.basis.iter().enumerate() {
        if bcol < ns {
            xs[bcol] = tab.rows[i][ncols].clone();
        }
    }
    // Duals of the normalised standard rows: y_i = c_B B⁻¹ e_i.
    let ys: Vec<T> = tab.unit_col.iter().map(|&u| tab.obj[u].clone()).collect();

    let primal: Vec<T> = sf
        .vars
        .iter()
        .map(|vm| {
            let mut v = T::from_rational(&vm.offset);
            for &(col, s) in &vm.parts {
                v = if s > 0 {
                    v.add(&xs[col])
                } else {
                    v.sub(&xs[col])
                };
            }
            v
        })
        .collect();
    let dual: Vec<T> = (0..sf.original_rows)
        .map(|i| {
            let y = if sf.flipped[i] {
                ys[i].neg()
            } else {
                ys[i].clone()
            };
            match p.sense {
                Sense::Maximize => y,
                Sense::Minimize => y.neg(),
            }
        })
        .collect();
    let mut objective = T::zero_s();
    for (j, c) in p.objective.iter().enumerate() {
        if !c.is_zero() {
            objective = objective.add(&T::from_rational(c).mul(&primal[j]));
        }
    }
    let out = LpOutcome {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective: Some(objective),
        pivots: tab.pivots,
    };
    let mut cert = xs;
    cert.extend(ys);
    Ok((out, sf, cert))
}

/// Check feasibility, dual feasibility and zero gap in standard form, and
/// feasibility of the reported primal against the original problem.
fn verify<T: Scalar>(
    p: &LpProblem,
    sf: &StandardForm,
    cert: &[T],
    out: &LpOutcome<T>,
    tol: f64,
) -> Result<(), LpError> {
    let ns = sf.c.len();
    let (xs, ys) = cert.split_at(ns);
    let scale = |v: &T| tol * (1.0 + v.to_f64().abs());
    for (j, x) in xs.iter().enumerate() {
        if x.is_neg(tol) {
            return Err(LpError::CertificateFailed(format!("x'[{j}] is negative")));
        }
    }
    let mut primal_obj = T::zero_s();
    for (j, c) in sf.c.iter().enumerate() {
        if !c.is_zero() {
            primal_obj = primal_obj.add(&T::from_rational(c).mul(&xs[j]));
        }
    }
    let mut dual_obj = T::zero_s();
    for (i, row) in sf.a.iter().enumerate() {
        let mut lhs = T::zero_s();
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                lhs = lhs.add(&T::from_rational(a).mul(&xs[j]));
            }
        }
        let slack = lhs.sub(&T::from_rational(&sf.b[i]));
        let bad = match sf.rel[i] {
            Relation::Le => slack.is_pos(scale(&lhs)),
            Relation::Ge => slack.is_neg(scale(&lhs)),
            Relation::Eq => !slack.is_zero_tol(scale(&lhs)),
        };
        if bad {
            return Err(LpError::CertificateFailed(format!(
                "standard row {i} violated"
            )));
        }
        let y = &ys[i];
        let sign_bad = match sf.rel[i] {
            Relation::Le => y.is_neg(tol),
            Relation::Ge => y.is_pos(tol),
            Relation::Eq => false,
        };
        if sign_bad {
            return Err(LpError::CertificateFailed(format!(
                "dual {i} has the wrong sign"
            )));
        }
        dual_obj = dual_obj.add(&T::from_rational(&sf.b[i]).mul(y));
    }
    for j in 0..ns {
        let mut col = T::zero_s();
        for (i, row) in sf.a.iter().enumerate() {
            if !row[j].is_zero() {
                col = col.add(&T::from_rational(&row[j]).mul(&ys[i]));
            }
        }
        let reduced = col.sub(&T::from_rational(&sf.c[j]));
        if reduced.is_neg(scale(&col)) {
            return Err(LpError::CertificateFailed(format!(
                "dual constraint for column {j} violated"
            )));
        }
    }
    let gap = primal_obj.sub(&dual_obj);
    if !gap.is_zero_tol(scale(&primal_obj)) {
        return Err(LpError::CertificateFailed(format!(
            "duality gap {:e}",
            gap.to_f64()
        )));
    }
    // Original problem: bounds and rows.
    for (j, x) in out.primal.iter().enumerate() {
        if let Some(l) = &p.lower[j] {
            if x.sub(&T::from_rational(l)).is_neg(scale(x)) {
                return Err(LpError::CertificateFailed(format!(
                    "x[{j}] below its lower bound"
                )));
            }
        }
        if let Some(u) = &p.upper[j] {
            if x.sub(&T::from_rational(u)).is_pos(scale(x)) {
                return Err(LpError::CertificateFailed(format!(
                    "x[{j}] above its upper bound"
                )));
            }
        }
    }
    for (i, con) in p.constraints.iter().enumerate() {
        let mut lhs = T::zero_s();
        for (j, a) in con.coeffs.iter().enumerate() {
            if !a.is_zero() {
                lhs = lhs.add(&T::from_rational(a).mul(&out.primal[j]));
            }
        }
        let slack = lhs.sub(&T::from_rational(&con.rhs));
        let bad = match con.relation {
            Relation::Le => slack.is_pos(scale(&lhs)),
            Relation::Ge => slack.is_neg(scale(&lhs)),
            Relation::Eq => !slack.is_zero_tol(scale(&lhs)),
        };
        if bad {
            return Err(LpError::CertificateFailed(format!(
                "constraint {i} violated"
            )));
        }
    }
    Ok(())
}

pub fn solve_exact(p: &LpProblem, limits: &LpLimits) -> Result<LpOutcome<Rational>, LpError> {
    p.validate()?;
    let nz = p.nonzeros();
    if nz > limits.max_exact_nonzeros {
        return Err(LpError::SizeCap {
            nonzeros: nz,
            cap: limits.max_exact_nonzeros,
        });
    }
    let (out, sf, cert) = solve_generic::<Rational>(p, 0.0, limits)?;
    if out.status == LpStatus::Optimal {
        verify(p, &sf, &cert, &out, 0.0)?;
    }
    Ok(out)
}

pub fn solve_float(
    p: &LpProblem,
    tolerance: f64,
    limits: &LpLimits,
) -> Result<LpOutcome<f64>, LpError> {
    p.validate()?;
    let pivot_tol = (tolerance * 1e-2).max(1e-12);
    let (out, sf, cert) = solve_generic::<f64>(p, pivot_tol, limits)?;
    if out.status == LpStatus::Optimal {
        verify(p, &sf, &cert, &out, tolerance)
            .map_err(|e| LpError::NumericalFailure(format!("float certificate: {e}")))?;
    }
    Ok(out)
}

pub fn solve(p: &LpProblem, mode: SolveMode, limits: &LpLimits) -> Result<Solution, LpError> {
    if let Ok(dir) = std::env::var("ADEG_LP_DUMP") {
        dump(p, &dir);
    }
    match mode {
        SolveMode::Exact => solve_exact(p, limits).map(Solution::Exact),
        SolveMode::Float { tolerance } => solve_float(p, tolerance, limits).map(Solution::Float),
    }
}

fn dump(p: &LpProblem, dir: &str) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let k = COUNTER.fetch_add(1, Ordering::Relaxed);
    let path = std::path::Path::new(dir).join(format!("problem-{}-{k:05}.lp", std::process::id()));
    if let Ok(file) = std::fs::File::create(path) {
        let _ = p.write_lp_format(std::io::BufWriter::new(file));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn limits() -> LpLimits {
        LpLimits::default()
    }

    #[test]
    fn max_x_bounded() {
        let mut p = LpProblem::new(1, Sense::Maximize);
        p.set_objective(0, int(1));
        p.add_constraint(vec![int(1)], Relation::Le, int(1));
        let out = solve_exact(&p, &limits()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.primal, vec![int(1)]);
        assert_eq!(out.dual, vec![int(1)]);
    }

    #[test]
    fn infeasible() {
        let mut p = LpProblem::new(1, Sense::Maximize);
        p.set_objective(0, int(1));
        p.set_free(0);
        p.add_constraint(vec![int(1)], Relation::Ge, int(1));
        p.add_constraint(vec![int(1)], Relation::Le, int(0));
        assert_eq!(
            solve_exact(&p, &limits()).unwrap().status,
            LpStatus::Infeasible
        );
        assert_eq!(
            solve_float(&p, 1e-7, &limits()).unwrap().status,
            LpStatus::Infeasible
        );
    }

    #[test]
    fn unbounded() {
        let mut p = LpProblem::new(2, Sense::Maximize);
        p.set_objective(0, int(1));
        p.add_constraint(vec![int(1), int(-1)], Relation::Le, int(1));
        assert_eq!(
            solve_exact(&p, &limits()).unwrap().status,
            LpStatus::Unbounded
        );
    }

    #[test]
    fn parity2_dual_lp() {
        // ψ = ψ⁺ − ψ⁻ over the 4 points of {0,1}^2, maximise Σψ·XOR,
        // Σ(ψ⁺+ψ⁻) ≤ 1, ψ ⟂ {1, x1, x2}.
        let xor = [0, 1, 1, 0];
        let mut p = LpProblem::new(8, Sense::Maximize);
        for x in 0..4 {
            p.set_objective(x, int(xor[x]));
            p.set_objective(4 + x, int(-xor[x]));
        }
        p.add_sparse((0..8).map(|j| (j, int(1))), Relation::Le, int(1));
        for mono in [0usize, 1, 2] {
            let terms = (0..4usize)
                .filter(|x| x & mono == mono)
                .flat_map(|x| [(x, int(1)), (4 + x, int(-1))]);
            p.add_sparse(terms, Relation::Eq, int(0));
        }
        let out = solve_exact(&p, &limits()).unwrap();
        assert_eq!(out.objective, Some(ratio(1, 2)));
        let fl = solve_float(&p, 1e-7, &limits()).unwrap();
        assert!((fl.objective.unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn minimise_with_free_and_bounded_vars() {
        // min x + y, x free, y ∈ [1, 3], x + y ≥ 2, x − y ≥ −4 → 2
        let mut p = LpProblem::new(2, Sense::Minimize);
        p.set_objective(0, int(1));
        p.set_objective(1, int(1));
        p.set_free(0);
        p.set_bounds(1, Some(int(1)), Some(int(3)));
        p.add_constraint(vec![int(1), int(1)], Relation::Ge, int(2));
        p.add_constraint(vec![int(1), int(-1)], Relation::Ge, int(-4));
        let out = solve_exact(&p, &limits()).unwrap();
        assert_eq!(out.objective, Some(int(2)));
        // Minimisation duals are ≥ 0 on ≥ rows.
        assert!(out.dual.iter().all(|y| !y.is_negative()));
    }

    #[test]
    fn size_cap() {
        let mut p = LpProblem::new(3, Sense::Maximize);
        p.add_constraint(vec![int(1), int(1), int(1)], Relation::Le, int(1));
        let tight = LpLimits {
            max_exact_nonzeros: 2,
            ..LpLimits::default()
        };
        assert!(matches!(
            solve_exact(&p, &tight),
            Err(LpError::SizeCap { .. })
        ));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example.
        let mut p = LpProblem::new(4, Sense::Maximize);
        for (j, c) in [ratio(3, 4), int(-150), ratio(1, 50), int(-6)]
            .into_iter()
            .enumerate()
        {
            p.set_objective(j, c);
        }
        p.add_constraint(
            vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)],
            Relation::Le,
            int(0),
        );
        p.add_constraint(
            vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)],
            Relation::Le,
            int(0),
        );
        p.add_constraint(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        let out = solve_exact(&p, &limits()).unwrap();
        assert_eq!(out.objective, Some(ratio(1, 20)));
    }

    #[test]
    fn lp_text_dump() {
        let mut p = LpProblem::new(2, Sense::Maximize);
        p.set_objective(0, int(1));
        p.set_free(1);
        p.add_constraint(vec![int(1), ratio(-1, 2)], Relation::Le, int(3));
        let mut buf = Vec::new();
        p.write_lp_format(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("Maximize"));
        assert!(s.contains("c1: + 1 x1 - 0.5 x2 <= 3"));
        assert!(s.contains("x2 free"));
    }
}
