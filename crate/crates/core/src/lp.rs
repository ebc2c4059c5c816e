//! Exact rational linear feasibility.
//!
//! Dense two-phase simplex over [`Rat`] with Bland's rule. Variables are free;
//! internally each one is split into a difference of two non-negative
//! columns. An infeasible system comes back with a Farkas certificate: one
//! multiplier per row, non-negative on `>=` rows, whose combination has an
//! identically zero left-hand side and a strictly positive right-hand side.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::duality::VerticalLineConfig;
use crate::error::{Error, Result};
use crate::geom::{DualLine, PathPerm};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

/// `sum(coeff * x[var]) (>= | =) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn lhs_at(&self, x: &[Rat]) -> Rat {
        self.coeffs.iter().map(|(v, a)| a * &x[*v]).sum()
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        let lhs = self.lhs_at(x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    num_vars: usize,
    constraints: Vec<Constraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    names: Vec<String>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            constraints: Vec::new(),
            names: Vec::new(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        LpProblem {
            num_vars: names.len(),
            constraints: Vec::new(),
            names,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_name(&self, v: usize) -> String {
        self.names.get(v).cloned().unwrap_or_else(|| format!("x{v}"))
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn add_ge(&mut self, coeffs: Vec<(usize, Rat)>, rhs: impl Into<Rat>) {
        self.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs: rhs.into(),
        });
    }

    pub fn add_eq(&mut self, coeffs: Vec<(usize, Rat)>, rhs: impl Into<Rat>) {
        self.push(Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs: rhs.into(),
        });
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    fn validate(&self) -> Result<()> {
        for (r, c) in self.constraints.iter().enumerate() {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= self.num_vars) {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} references variable {v} of {}",
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// CPLEX LP text, with each row scaled to integer coefficients.
    pub fn to_lp_format(&self, objective: Option<&[(usize, Rat)]>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ generated by monoseq");
        let _ = writeln!(out, "Minimize");
        match objective {
            Some(obj) if !obj.is_empty() => {
                let (terms, _) = integer_row(obj, &Rat::zero());
                let _ = writeln!(out, " obj: {}", self.render_terms(&terms));
            }
            _ => {
                let _ = writeln!(out, " obj: 0 {}", self.var_name(0));
            }
        }
        let _ = writeln!(out, "Subject To");
        for (r, c) in self.constraints.iter().enumerate() {
            let (terms, rhs) = integer_row(&c.coeffs, &c.rhs);
            let rel = match c.relation {
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            let lhs = if terms.is_empty() {
                format!("0 {}", self.var_name(0))
            } else {
                self.render_terms(&terms)
            };
            let _ = writeln!(out, " c{}: {} {} {}", r + 1, lhs, rel, rhs);
        }
        let _ = writeln!(out, "Bounds");
        for v in 0..self.num_vars {
            let _ = writeln!(out, " {} free", self.var_name(v));
        }
        let _ = writeln!(out, "End");
        out
    }

    fn render_terms(&self, terms: &[(usize, BigInt)]) -> String {
        let mut s = String::new();
        for (i, (v, a)) in terms.iter().enumerate() {
            let neg = a.sign() == num_bigint::Sign::Minus;
            let mag = if neg { -a } else { a.clone() };
            if i == 0 {
                if neg {
                    s.push_str("- ");
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                s.push_str(&self.var_name(*v));
            } else {
                let _ = write!(s, "{} {}", mag, self.var_name(*v));
            }
        }
        s
    }
}

fn integer_row(coeffs: &[(usize, Rat)], rhs: &Rat) -> (Vec<(usize, BigInt)>, BigInt) {
    let mut lcm = BigInt::one();
    for (_, a) in coeffs {
        lcm = lcm.lcm(a.denom());
    }
    lcm = lcm.lcm(rhs.denom());
    let scale = Rat::from(lcm);
    let terms = coeffs
        .iter()
        .filter(|(_, a)| !a.is_zero())
        .map(|(v, a)| (*v, (a * &scale).numer().clone()))
        .collect();
    (terms, (rhs * &scale).numer().clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub assignment: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rat>,
}

impl FarkasCertificate {
    /// Exact substitution check against `p`.
    pub fn verify(&self, p: &LpProblem) -> bool {
        if self.multipliers.len() != p.constraints.len() {
            return false;
        }
        let mut combo = vec![Rat::zero(); p.num_vars];
        let mut rhs = Rat::zero();
        for (c, lambda) in p.constraints.iter().zip(&self.multipliers) {
            if c.relation == Relation::Ge && lambda.is_negative() {
                return false;
            }
            if lambda.is_zero() {
                continue;
            }
            for (v, a) in &c.coeffs {
                combo[*v] += &(a * lambda);
            }
            rhs += &(&c.rhs * lambda);
        }
        combo.iter().all(Rat::is_zero) && rhs.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(LpSolution),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Optimal { solution: LpSolution, value: Rat },
    Infeasible(FarkasCertificate),
    Unbounded,
}

/// Find any point satisfying every row of `p`, or prove there is none.
pub fn feasible(p: &LpProblem) -> Result<Feasibility> {
    p.validate()?;
    let mut t = Tableau::build(p);
    match t.phase_one(p) {
        PhaseOne::Infeasible(cert) => Ok(Feasibility::Infeasible(cert)),
        PhaseOne::Feasible => Ok(Feasibility::Feasible(t.solution(p.num_vars))),
    }
}

/// Minimize a linear objective over the rows of `p`.
pub fn minimize(p: &LpProblem, objective: &[(usize, Rat)]) -> Result<Optimum> {
    p.validate()?;
    if let Some((v, _)) = objective.iter().find(|(v, _)| *v >= p.num_vars) {
        return Err(Error::DimensionMismatch(format!("objective references variable {v}")));
    }
    let mut t = Tableau::build(p);
    if let PhaseOne::Infeasible(cert) = t.phase_one(p) {
        return Ok(Optimum::Infeasible(cert));
    }
    let mut cost = vec![Rat::zero(); t.cols];
    for (v, c) in objective {
        cost[2 * v] += c;
        cost[2 * v + 1] -= c;
    }
    if !t.optimize(&cost) {
        return Ok(Optimum::Unbounded);
    }
    let solution = t.solution(p.num_vars);
    let value = objective.iter().map(|(v, c)| c * &solution.assignment[*v]).sum();
    Ok(Optimum::Optimal { solution, value })
}

enum PhaseOne {
    Feasible,
    Infeasible(FarkasCertificate),
}

/// Column layout: `2v` / `2v + 1` for the positive / negative part of
/// variable `v`, then one surplus column per `>=` row, then one artificial
/// column per row.
struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
    art_start: usize,
    /// Row sign applied to make the right-hand side non-negative.
    sign: Vec<bool>,
    /// Columns allowed to enter the basis.
    enterable: Vec<bool>,
    reduced: Vec<Rat>,
}

impl Tableau {
    fn build(p: &LpProblem) -> Self {
        let m = p.constraints.len();
        let n_struct = 2 * p.num_vars;
        let n_surplus = p
            .constraints
            .iter()
            .filter(|c| c.relation == Relation::Ge)
            .count();
        let art_start = n_struct + n_surplus;
        let cols = art_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        let mut enterable = vec![true; cols];
        for e in enterable.iter_mut().skip(art_start) {
            *e = false;
        }

        let mut surplus = n_struct;
        for (r, c) in p.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            let s = if flip { Rat::from(-1) } else { Rat::one() };
            let mut row = vec![Rat::zero(); cols];
            for (v, a) in &c.coeffs {
                let a = a * &s;
                row[2 * v] += &a;
                row[2 * v + 1] -= &a;
            }
            let mut basic = art_start + r;
            if c.relation == Relation::Ge {
                row[surplus] = -&s;
                if flip {
                    // surplus enters with coefficient +1: use it as the start basis
                    basic = surplus;
                }
                surplus += 1;
            }
            row[art_start + r] = Rat::one();
            rows.push(row);
            rhs.push(&c.rhs * &s);
            basis.push(basic);
            sign.push(flip);
        }

        Tableau {
            rows,
            rhs,
            basis,
            cols,
            art_start,
            sign,
            enterable,
            reduced: Vec::new(),
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.art_start
    }

    fn set_costs(&mut self, cost: &[Rat]) {
        let mut reduced = cost.to_vec();
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] -= &(cb * a);
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip().expect("pivot on a non-zero entry");
        for a in self.rows[pr].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        self.rhs[pr] *= &inv;
        let nz: Vec<usize> = (0..self.cols).filter(|&j| !self.rows[pr][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let pivot_rhs = self.rhs[pr].clone();
        for r in 0..self.rows.len() {
            if r == pr {
                continue;
            }
            let f = self.rows[r][pc].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                self.rows[r][j] -= &delta;
            }
            let delta = &f * &pivot_rhs;
            self.rhs[r] -= &delta;
        }
        let f = self.reduced[pc].clone();
        if !f.is_zero() {
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                self.reduced[j] -= &delta;
            }
        }
        self.rows[pr] = pivot_row;
        self.basis[pr] = pc;
    }

    /// Bland's rule until optimal; false when unbounded.
    fn optimize(&mut self, cost: &[Rat]) -> bool {
        self.set_costs(cost);
        loop {
            let Some(pc) = (0..self.cols).find(|&j| self.enterable[j] && self.reduced[j].is_negative())
            else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc);
        }
    }

    fn phase_one(&mut self, p: &LpProblem) -> PhaseOne {
        let mut cost = vec![Rat::zero(); self.cols];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = Rat::one();
        }
        let bounded = self.optimize(&cost);
        debug_assert!(bounded, "phase one is bounded below by zero");
        let infeasibility: Rat = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| self.is_artificial(**b))
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            // dual value of row r is 1 - reduced cost of its artificial column
            let multipliers = (0..self.rows.len())
                .map(|r| {
                    let u = Rat::one() - &self.reduced[self.art_start + r];
                    if self.sign[r] {
                        -u
                    } else {
                        u
                    }
                })
                .collect();
            let cert = FarkasCertificate { multipliers };
            debug_assert!(cert.verify(p));
            return PhaseOne::Infeasible(cert);
        }
        // drive zero-valued artificials out of the basis where possible
        for r in 0..self.rows.len() {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            if let Some(j) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, j);
            }
        }
        PhaseOne::Feasible
    }

    fn solution(&self, num_vars: usize) -> LpSolution {
        let mut value = vec![Rat::zero(); self.cols];
        for (r, &b) in self.basis.iter().enumerate() {
            value[b] = self.rhs[r].clone();
        }
        let assignment = (0..num_vars)
            .map(|v| &value[2 * v] - &value[2 * v + 1])
            .collect();
        LpSolution { assignment }
    }
}

/// Index of `y_{i,j}`: ordinate of line `j` (1-based) on vertical line `i`
/// (0-based).
pub fn embedding_var(n: usize, i: usize, j: usize) -> usize {
    i * n + (j - 1)
}

/// The feasibility system for placing `n` non-vertical lines so that they
/// cross vertical line `i` top to bottom in the order `seq[i]`.
pub fn build_embedding_lp(seq: &[PathPerm], cfg: &VerticalLineConfig) -> Result<LpProblem> {
    build_embedding_lp_with_gap(seq, cfg, &Rat::one())
}

/// As [`build_embedding_lp`] with minimum separation `gap` instead of 1.
pub fn build_embedding_lp_with_gap(
    seq: &[PathPerm],
    cfg: &VerticalLineConfig,
    gap: &Rat,
) -> Result<LpProblem> {
    let k = seq.len();
    if k == 0 || k != cfg.len() {
        return Err(Error::DimensionMismatch(format!(
            "{k} paths against {} vertical lines",
            cfg.len()
        )));
    }
    let n = seq[0].len();
    if seq.iter().any(|p| p.len() != n) {
        return Err(Error::DimensionMismatch("paths differ in length".into()));
    }
    let names = (0..k)
        .flat_map(|i| (1..=n).map(move |j| format!("y_{}_{}", i + 1, j)))
        .collect();
    let mut lp = LpProblem::with_names(names);
    let var = |i: usize, j: usize| embedding_var(n, i, j);

    for (i, path) in seq.iter().enumerate() {
        for w in path.order().windows(2) {
            let (upper, lower) = (w[0], w[1]);
            lp.add_ge(
                vec![(var(i, upper), Rat::one()), (var(i, lower), Rat::from(-1))],
                gap.clone(),
            );
        }
    }
    let q = cfg.gaps();
    for j in 1..=n {
        for i in 1..k.saturating_sub(1) {
            // q_i (y_{2,j} - y_{1,j}) = q_1 (y_{i+1,j} - y_{i,j})
            let (qi, q1) = (&q[i], &q[0]);
            lp.add_eq(
                vec![
                    (var(1, j), qi.clone()),
                    (var(0, j), -qi),
                    (var(i + 1, j), -q1),
                    (var(i, j), q1.clone()),
                ],
                Rat::zero(),
            );
        }
    }
    lp.add_eq(vec![(var(0, 1), Rat::one())], Rat::zero());
    Ok(lp)
}

/// Lines through the solved ordinates; with a single vertical line every
/// line is horizontal.
pub fn lines_from_solution(sol: &LpSolution, cfg: &VerticalLineConfig, n: usize) -> Vec<DualLine> {
    let xs = cfg.xs();
    let y = &sol.assignment;
    (1..=n)
        .map(|j| {
            let y0 = &y[embedding_var(n, 0, j)];
            if xs.len() == 1 {
                return DualLine::new(Rat::zero(), y0.clone());
            }
            let y1 = &y[embedding_var(n, 1, j)];
            DualLine::through(&xs[0], y0, &xs[1], y1)
        })
        .collect()
}
