//! Dense bounded-variable primal simplex for `max <c, x>` over `Ax <= b`,
//! `0 <= x <= 1`, plus the convex-hull membership LP used by the tests.
//!
//! The solver keeps an explicit basis inverse. Rows can be appended after a
//! solve; the next solve starts from the previous basis with the new row's
//! slack (or an artificial, when the row is violated) made basic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DRIFT_TOL: f64 = 1e-5;
const FEASIBILITY_CHECK: f64 = 1e-7;
const REFACTOR_EVERY: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `max <objective, x>` s.t. every row `<coeffs, x> <= rhs`, `x in [0,1]^n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.rows.push(LpRow { coeffs, rhs });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// Row duals (nonnegative at an optimum of a maximization).
    pub duals: Option<Vec<f64>>,
    pub pivots: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("numerical instability: {0}")]
    NumericalInstability(String),
    #[error("row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, got: usize },
    #[error("non-finite data in {0}")]
    NonFinite(&'static str),
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
}

/// Internal failures that allow one restart.
enum Fault {
    Drift(f64),
    Singular,
    Fatal(LpError),
}

impl From<LpError> for Fault {
    fn from(e: LpError) -> Self {
        Fault::Fatal(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Col {
    X(usize),
    S(usize),
    A(usize),
}

#[derive(Debug, Clone, Copy)]
struct Artificial {
    row: usize,
    sign: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

/// Stateful simplex over `rows · x + s = rhs`, `0 <= x <= upper`,
/// `0 <= s <= slack_upper`.
#[derive(Debug, Clone)]
pub struct LpSolver {
    n: usize,
    objective: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    slack_upper: Vec<f64>,
    arts: Vec<Artificial>,
    basis: Vec<Col>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    x_val: Vec<f64>,
    s_val: Vec<f64>,
    x_pos: Vec<Option<usize>>,
    s_pos: Vec<Option<usize>>,
    a_pos: Vec<Option<usize>>,
    since_refactor: usize,
    pivots: usize,
}

impl LpSolver {
    pub fn new(problem: &LpProblem) -> Result<Self, LpError> {
        let n = problem.objective.len();
        let mut rows = Vec::with_capacity(problem.rows.len());
        let mut rhs = Vec::with_capacity(problem.rows.len());
        for (i, r) in problem.rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    row: i,
                    expected: n,
                    got: r.coeffs.len(),
                });
            }
            rows.push(r.coeffs.clone());
            rhs.push(r.rhs);
        }
        let m = rows.len();
        Self::from_parts(problem.objective.clone(), vec![1.0; n], rows, rhs, vec![f64::INFINITY; m])
    }

    fn from_parts(
        objective: Vec<f64>,
        upper: Vec<f64>,
        rows: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        slack_upper: Vec<f64>,
    ) -> Result<Self, LpError> {
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if rows.iter().flatten().chain(&rhs).any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("rows"));
        }
        let n = objective.len();
        let m = rows.len();
        let mut solver = Self {
            n,
            objective,
            upper,
            rows,
            rhs,
            slack_upper,
            arts: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            x_val: vec![0.0; n],
            s_val: vec![0.0; m],
            x_pos: vec![None; n],
            s_pos: vec![None; m],
            a_pos: Vec::new(),
            since_refactor: 0,
            pivots: 0,
        };
        solver.cold_start();
        Ok(solver)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    /// Slack basis, with an artificial for every row the origin violates.
    fn cold_start(&mut self) {
        let m = self.rows.len();
        self.arts.clear();
        self.a_pos.clear();
        self.basis.clear();
        self.xb.clear();
        self.binv = vec![0.0; m * m];
        self.x_val.iter_mut().for_each(|v| *v = 0.0);
        self.x_pos.iter_mut().for_each(|p| *p = None);
        self.s_val = vec![0.0; m];
        self.s_pos = vec![None; m];
        for i in 0..m {
            let b = self.rhs[i];
            if b >= 0.0 && b <= self.slack_upper[i] {
                self.basis.push(Col::S(i));
                self.s_pos[i] = Some(i);
                self.xb.push(b);
                self.binv[i * m + i] = 1.0;
            } else {
                // slack sits at its bound nearest to b
                let s = if b < 0.0 { 0.0 } else { self.slack_upper[i] };
                self.s_val[i] = s;
                let resid = b - s;
                let sign = resid.signum();
                self.arts.push(Artificial { row: i, sign });
                self.a_pos.push(Some(i));
                self.basis.push(Col::A(self.arts.len() - 1));
                self.xb.push(resid.abs());
                self.binv[i * m + i] = sign;
            }
        }
        self.since_refactor = 0;
    }

    /// Append `<coeffs, x> <= rhs` and keep the current basis.
    pub fn add_row(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<(), LpError> {
        if coeffs.len() != self.n {
            return Err(LpError::DimensionMismatch {
                row: self.rows.len(),
                expected: self.n,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) || !rhs.is_finite() {
            return Err(LpError::NonFinite("rows"));
        }
        let m = self.rows.len();
        let x = self.primal_x();
        let activity: f64 = coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
        let slack = rhs - activity;

        // coefficients of the new row on the current basic variables
        let r: Vec<f64> = self
            .basis
            .iter()
            .map(|c| match *c {
                Col::X(j) => coeffs[j],
                _ => 0.0,
            })
            .collect();
        let mut rb = vec![0.0; m];
        for (k, &rk) in r.iter().enumerate() {
            if rk != 0.0 {
                let row = &self.binv[k * m..(k + 1) * m];
                for (acc, &v) in rb.iter_mut().zip(row) {
                    *acc += rk * v;
                }
            }
        }
        let (col, sign, value) = if slack >= -PRIMAL_TOL {
            (Col::S(m), 1.0, slack.max(0.0))
        } else {
            self.arts.push(Artificial { row: m, sign: -1.0 });
            self.a_pos.push(Some(m));
            (Col::A(self.arts.len() - 1), -1.0, -slack)
        };
        let m1 = m + 1;
        let mut binv = vec![0.0; m1 * m1];
        for i in 0..m {
            binv[i * m1..i * m1 + m].copy_from_slice(&self.binv[i * m..(i + 1) * m]);
        }
        for (k, v) in rb.iter().enumerate() {
            binv[m * m1 + k] = -sign * v;
        }
        binv[m * m1 + m] = sign;
        self.binv = binv;
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        self.slack_upper.push(f64::INFINITY);
        self.s_val.push(0.0);
        self.s_pos.push(None);
        if let Col::S(_) = col {
            self.s_pos[m] = Some(m);
        }
        self.basis.push(col);
        self.xb.push(value);
        Ok(())
    }

    fn value(&self, c: Col) -> f64 {
        match c {
            Col::X(j) => self.x_pos[j].map_or(self.x_val[j], |p| self.xb[p]),
            Col::S(i) => self.s_pos[i].map_or(self.s_val[i], |p| self.xb[p]),
            Col::A(k) => self.a_pos[k].map_or(0.0, |p| self.xb[p]),
        }
    }

    fn primal_x(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.value(Col::X(j))).collect()
    }

    fn upper_of(&self, c: Col, phase: Phase) -> f64 {
        match c {
            Col::X(j) => self.upper[j],
            Col::S(i) => self.slack_upper[i],
            Col::A(_) => match phase {
                Phase::One => f64::INFINITY,
                Phase::Two => 0.0,
            },
        }
    }

    fn cost(&self, c: Col, phase: Phase) -> f64 {
        match (phase, c) {
            (Phase::One, Col::A(_)) => -1.0,
            (Phase::Two, Col::X(j)) => self.objective[j],
            _ => 0.0,
        }
    }

    fn set_pos(&mut self, c: Col, pos: Option<usize>) {
        match c {
            Col::X(j) => self.x_pos[j] = pos,
            Col::S(i) => self.s_pos[i] = pos,
            Col::A(k) => self.a_pos[k] = pos,
        }
    }

    fn set_nonbasic_value(&mut self, c: Col, v: f64) {
        match c {
            Col::X(j) => self.x_val[j] = v,
            Col::S(i) => self.s_val[i] = v,
            Col::A(_) => {}
        }
    }

    /// `B⁻¹ a_c`.
    fn ftran(&self, c: Col) -> Vec<f64> {
        let m = self.rows.len();
        let mut out = vec![0.0; m];
        match c {
            Col::X(j) => {
                for (i, row) in self.rows.iter().enumerate() {
                    let a = row[j];
                    if a != 0.0 {
                        for (r, o) in out.iter_mut().enumerate() {
                            *o += self.binv[r * m + i] * a;
                        }
                    }
                }
            }
            Col::S(i) => {
                for (r, o) in out.iter_mut().enumerate() {
                    *o = self.binv[r * m + i];
                }
            }
            Col::A(k) => {
                let Artificial { row, sign } = self.arts[k];
                for (r, o) in out.iter_mut().enumerate() {
                    *o = self.binv[r * m + row] * sign;
                }
            }
        }
        out
    }

    fn duals(&self, phase: Phase) -> Vec<f64> {
        let m = self.rows.len();
        let mut y = vec![0.0; m];
        for (r, &c) in self.basis.iter().enumerate() {
            let cb = self.cost(c, phase);
            if cb != 0.0 {
                for (yi, &b) in y.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *yi += cb * b;
                }
            }
        }
        y
    }

    fn column_dense(&self, c: Col) -> Vec<f64> {
        let m = self.rows.len();
        let mut col = vec![0.0; m];
        match c {
            Col::X(j) => {
                for (i, row) in self.rows.iter().enumerate() {
                    col[i] = row[j];
                }
            }
            Col::S(i) => col[i] = 1.0,
            Col::A(k) => col[self.arts[k].row] = self.arts[k].sign,
        }
        col
    }

    /// Rebuild `B⁻¹` by Gauss-Jordan elimination and recompute the basic
    /// values. Returns the largest change in a basic value.
    fn refactor(&mut self) -> Result<f64, Fault> {
        let m = self.rows.len();
        self.since_refactor = 0;
        if m == 0 {
            return Ok(0.0);
        }
        let w = 2 * m;
        let mut aug = vec![0.0; m * w];
        for (r, &c) in self.basis.iter().enumerate() {
            for (i, v) in self.column_dense(c).into_iter().enumerate() {
                aug[i * w + r] = v;
            }
        }
        for i in 0..m {
            aug[i * w + m + i] = 1.0;
        }
        for col in 0..m {
            let (p, pv) = (col..m)
                .map(|r| (r, aug[r * w + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pv < 1e-11 {
                return Err(Fault::Singular);
            }
            if p != col {
                for k in 0..w {
                    aug.swap(p * w + k, col * w + k);
                }
            }
            let inv = 1.0 / aug[col * w + col];
            for k in 0..w {
                aug[col * w + k] *= inv;
            }
            for r in 0..m {
                if r != col {
                    let f = aug[r * w + col];
                    if f != 0.0 {
                        for k in 0..w {
                            aug[r * w + k] -= f * aug[col * w + k];
                        }
                    }
                }
            }
        }
        for i in 0..m {
            self.binv[i * m..(i + 1) * m].copy_from_slice(&aug[i * w + m..(i + 1) * w]);
        }

        // b - N x_N
        let mut resid = self.rhs.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for (j, &a) in row.iter().enumerate() {
                if self.x_pos[j].is_none() && self.x_val[j] != 0.0 {
                    acc += a * self.x_val[j];
                }
            }
            if self.s_pos[i].is_none() {
                acc += self.s_val[i];
            }
            resid[i] -= acc;
        }
        let mut drift = 0.0f64;
        for r in 0..m {
            let v: f64 = self.binv[r * m..(r + 1) * m].iter().zip(&resid).map(|(a, b)| a * b).sum();
            drift = drift.max((v - self.xb[r]).abs());
            self.xb[r] = v;
        }
        if drift > DRIFT_TOL {
            return Err(Fault::Drift(drift));
        }
        Ok(drift)
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.rows.len();
        let inv = 1.0 / alpha[r];
        for k in 0..m {
            self.binv[r * m + k] *= inv;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for (i, chunk) in before.chunks_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                for (v, p) in chunk.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
            }
        }
        for (i, chunk) in after.chunks_mut(m).enumerate() {
            let f = alpha[r + 1 + i];
            if f != 0.0 {
                for (v, p) in chunk.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
            }
        }
        self.since_refactor += 1;
        self.pivots += 1;
    }

    /// Primal simplex for one phase. Returns `false` when unbounded.
    fn optimize(&mut self, phase: Phase) -> Result<bool, Fault> {
        let m = self.rows.len();
        let ncols = self.n + m;
        let degenerate_limit = 2 * (m + ncols);
        let pivot_limit = 200 * (m + ncols) + 1000;
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut steps = 0usize;
        loop {
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            steps += 1;
            if steps > pivot_limit {
                return Err(Fault::Fatal(LpError::PivotLimit(pivot_limit)));
            }
            let y = self.duals(phase);
            let mut d: Vec<f64> = match phase {
                Phase::Two => self.objective.clone(),
                Phase::One => vec![0.0; self.n],
            };
            for (yi, row) in y.iter().zip(&self.rows) {
                if *yi != 0.0 {
                    for (dj, a) in d.iter_mut().zip(row) {
                        *dj -= yi * a;
                    }
                }
            }
            let candidates = (0..self.n)
                .map(|j| (Col::X(j), d[j]))
                .chain((0..m).map(|i| (Col::S(i), -y[i])));
            let mut entering: Option<(Col, f64)> = None;
            for (c, dj) in candidates {
                let pos = match c {
                    Col::X(j) => self.x_pos[j],
                    Col::S(i) => self.s_pos[i],
                    Col::A(_) => unreachable!(),
                };
                if pos.is_some() {
                    continue;
                }
                let ub = self.upper_of(c, phase);
                let v = self.value(c);
                let at_upper = v > 0.0;
                let improving = (!at_upper && ub > 0.0 && dj > DUAL_TOL) || (at_upper && dj < -DUAL_TOL);
                if !improving {
                    continue;
                }
                if bland {
                    entering = Some((c, dj));
                    break;
                }
                if entering.is_none_or(|(_, best)| dj.abs() > best.abs()) {
                    entering = Some((c, dj));
                }
            }
            let Some((enter, dj)) = entering else {
                return Ok(true);
            };
            let dir = if dj > 0.0 { 1.0 } else { -1.0 };
            let alpha = self.ftran(enter);
            let mut t_max = self.upper_of(enter, phase);
            let mut leave: Option<(usize, f64, bool)> = None; // (row, |alpha|, to_upper)
            for r in 0..m {
                let a = alpha[r] * dir;
                let (ratio, to_upper) = if a > PIVOT_TOL {
                    ((self.xb[r] / a).max(0.0), false)
                } else if a < -PIVOT_TOL {
                    let ub = self.upper_of(self.basis[r], phase);
                    if !ub.is_finite() {
                        continue;
                    }
                    (((ub - self.xb[r]) / -a).max(0.0), true)
                } else {
                    continue;
                };
                let better = match leave {
                    None => ratio < t_max,
                    Some((lr, la, _)) => {
                        ratio < t_max - 1e-12
                            || (ratio <= t_max + 1e-12
                                && if bland {
                                    self.basis[r] < self.basis[lr]
                                } else {
                                    a.abs() > la
                                })
                    }
                };
                if better {
                    t_max = ratio;
                    leave = Some((r, a.abs(), to_upper));
                }
            }
            if !t_max.is_finite() {
                return Ok(false);
            }
            let t = t_max;
            for (xb, a) in self.xb.iter_mut().zip(&alpha) {
                *xb -= dir * t * a;
            }
            let start = self.value(enter);
            match leave {
                None => {
                    let ub = self.upper_of(enter, phase);
                    self.set_nonbasic_value(enter, if dir > 0.0 { ub } else { 0.0 });
                }
                Some((r, _, to_upper)) => {
                    let out = self.basis[r];
                    let bound = if to_upper { self.upper_of(out, phase) } else { 0.0 };
                    self.set_nonbasic_value(out, bound);
                    self.set_pos(out, None);
                    self.pivot(r, &alpha);
                    self.basis[r] = enter;
                    self.set_pos(enter, Some(r));
                    self.xb[r] = start + dir * t;
                }
            }
            if t < 1e-12 {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn artificial_mass(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(c, _)| matches!(c, Col::A(_)))
            .map(|(_, v)| v.max(0.0))
            .sum()
    }

    fn max_row_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            let act: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            let s = self.value(Col::S(i));
            worst = worst.max((act + s - self.rhs[i]).abs());
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(-v).max(v - self.upper[j]);
        }
        worst
    }

    fn solve_once(&mut self) -> Result<LpSolution, Fault> {
        if self.artificial_mass() > PRIMAL_TOL {
            self.optimize(Phase::One)?;
            self.refactor()?;
            if self.artificial_mass() > FEASIBILITY_CHECK {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: Vec::new(),
                    objective_value: f64::NEG_INFINITY,
                    duals: None,
                    pivots: self.pivots,
                });
            }
        }
        if !self.optimize(Phase::Two)? {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective_value: f64::INFINITY,
                duals: None,
                pivots: self.pivots,
            });
        }
        if self.since_refactor > 0 {
            self.refactor()?;
        }
        let x: Vec<f64> = self.primal_x().into_iter().map(|v| v.max(0.0)).collect();
        let violation = self.max_row_violation(&x);
        if violation > DRIFT_TOL {
            return Err(Fault::Drift(violation));
        }
        let objective_value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            objective_value,
            duals: Some(self.duals(Phase::Two)),
            pivots: self.pivots,
        })
    }

    /// Solve from the current basis. On drift or a singular basis the solve
    /// restarts once from the slack basis; a second failure is an error.
    pub fn solve(&mut self) -> Result<LpSolution, LpError> {
        self.pivots = 0;
        let mut restarted = false;
        loop {
            match self.solve_once() {
                Ok(sol) => return Ok(sol),
                Err(Fault::Fatal(e)) => return Err(e),
                Err(fault) if !restarted => {
                    if let Fault::Drift(d) = fault {
                        log::debug!("simplex drift {d:.3e}; restarting from slack basis");
                    }
                    restarted = true;
                    self.cold_start();
                }
                Err(Fault::Drift(d)) => {
                    return Err(LpError::NumericalInstability(format!("feasibility drift {d:.3e}")))
                }
                Err(Fault::Singular) => {
                    return Err(LpError::NumericalInstability("singular basis".into()))
                }
            }
        }
    }
}

/// One-shot solve.
pub fn solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    LpSolver::new(problem)?.solve()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    /// Lower bound on the Euclidean distance from the point to the hull.
    pub distance_lb: f64,
}

/// Decide `point ∈ conv(vertices)` by minimizing the L1 residual of a
/// convex combination. `distance_lb` is that residual divided by `√k`.
pub fn membership_test(point: &[f64], vertices: &[Vec<u8>]) -> Result<Membership, LpError> {
    assert!(!vertices.is_empty(), "membership test needs at least one vertex");
    let k = point.len();
    let nv = vertices.len();
    // columns: λ (nv), s⁺ (k), s⁻ (k)
    let ncols = nv + 2 * k;
    let mut objective = vec![0.0; ncols];
    objective[nv..].iter_mut().for_each(|c| *c = -1.0);
    let mut upper = vec![1.0; nv];
    upper.extend(std::iter::repeat_n(f64::INFINITY, 2 * k));
    let mut rows = Vec::with_capacity(k + 1);
    for (i, &p) in point.iter().enumerate() {
        let mut row = vec![0.0; ncols];
        for (v, vert) in vertices.iter().enumerate() {
            assert_eq!(vert.len(), k, "vertex dimension");
            row[v] = vert[i] as f64;
        }
        row[nv + i] = 1.0;
        row[nv + k + i] = -1.0;
        rows.push((row, p));
    }
    let mut sum = vec![0.0; ncols];
    sum[..nv].iter_mut().for_each(|c| *c = 1.0);
    rows.push((sum, 1.0));
    let (rows, rhs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let m = rows.len();
    let mut solver = LpSolver::from_parts(objective, upper, rows, rhs, vec![0.0; m])?;
    let sol = solver.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalInstability(format!(
            "membership LP ended {:?}",
            sol.status
        )));
    }
    let l1 = -sol.objective_value;
    Ok(Membership {
        inside: l1 <= FEASIBILITY_CHECK,
        distance_lb: l1.max(0.0) / (k.max(1) as f64).sqrt(),
    })
}

/// Cut pool with duplicate rejection on the cosine of `(α, β)`.
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    entries: Vec<(Vec<f64>, f64, f64)>,
}

pub const DUPLICATE_COSINE: f64 = 1.0 - 1e-9;

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_duplicate(&self, alpha: &[f64], beta: f64) -> bool {
        let norm = (alpha.iter().map(|a| a * a).sum::<f64>() + beta * beta).sqrt();
        if norm == 0.0 {
            return true;
        }
        self.entries.iter().any(|(a, b, nrm)| {
            let dot: f64 = a.iter().zip(alpha).map(|(x, y)| x * y).sum::<f64>() + b * beta;
            dot / (nrm * norm) > DUPLICATE_COSINE
        })
    }

    /// Adds the cut unless it duplicates one already pooled.
    pub fn insert(&mut self, alpha: &[f64], beta: f64) -> bool {
        if self.is_duplicate(alpha, beta) {
            return false;
        }
        let norm = (alpha.iter().map(|a| a * a).sum::<f64>() + beta * beta).sqrt();
        self.entries.push((alpha.to_vec(), beta, norm));
        true
    }
}
