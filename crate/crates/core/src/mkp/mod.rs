//! Multidimensional knapsack (and generalized assignment) instances and the
//! root-node cut loop that separates their knapsack rows.

mod driver;
mod generate;
mod parse;

pub use driver::{
    audit_run, fmt_num, root_cut_loop, AuditCheck, AuditReport, DriverError, LiftingMode, LoopConfig, PoolCut,
    RootRun, RootRunReport, SeparationCounters, Timings, REPORT_SCHEMA_VERSION,
};
pub use generate::{chu_beasley, write_mknap};
pub use parse::{parse_gap, parse_mknap, parse_optima, ParseError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::LpProblem;

/// `max <c, x>` s.t. `Ax <= b`, `x in {0,1}^n`, optionally with assignment
/// equalities `Σ_{j in group} x_j = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MkpInstance {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub profits: Vec<i64>,
    /// Row-major `m × n`.
    pub weights: Vec<Vec<u64>>,
    pub capacities: Vec<u64>,
    pub known_optimum: Option<i64>,
    /// Variable groups that must sum to exactly one. Empty for plain MKP.
    #[serde(default)]
    pub assignment: Vec<Vec<usize>>,
}

impl MkpInstance {
    /// Instances sharing a block tag are averaged together in reports.
    pub fn block(&self) -> String {
        if self.assignment.is_empty() {
            format!("n{}-m{}", self.n, self.m)
        } else {
            format!("gap-m{}-n{}", self.m, self.assignment.len())
        }
    }

    pub fn is_feasible(&self, x: &[u8]) -> bool {
        let rows_ok = self
            .weights
            .iter()
            .zip(&self.capacities)
            .all(|(w, &c)| crate::oracle::weight_of(w, x) <= c);
        rows_ok
            && self
                .assignment
                .iter()
                .all(|g| g.iter().map(|&j| x[j] as u32).sum::<u32>() == 1)
    }

    pub fn value(&self, x: &[u8]) -> i64 {
        self.profits.iter().zip(x).filter(|(_, &b)| b != 0).map(|(c, _)| c).sum()
    }

    /// LP relaxation: knapsack rows first, then each assignment equality as
    /// a pair of `<=` rows.
    pub fn lp_relaxation(&self) -> LpProblem {
        let mut lp = LpProblem::new(self.profits.iter().map(|&c| c as f64).collect());
        for (w, &b) in self.weights.iter().zip(&self.capacities) {
            lp.add_row(w.iter().map(|&a| a as f64).collect(), b as f64);
        }
        for group in &self.assignment {
            let mut row = vec![0.0; self.n];
            for &j in group {
                row[j] = 1.0;
            }
            lp.add_row(row.clone(), 1.0);
            lp.add_row(row.iter().map(|v| -v).collect(), -1.0);
        }
        lp
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum GapError {
    #[error("root LP is integral (p = d_lp); gap closed is undefined")]
    IntegralRoot,
}

/// `100 − 100 (p − d_r)/(p − d_lp)`.
pub fn gap_closed(p: f64, d_lp: f64, d_r: f64) -> Result<f64, GapError> {
    if (d_lp - p).abs() <= 1e-9 * p.abs().max(1.0) {
        return Err(GapError::IntegralRoot);
    }
    Ok(100.0 - 100.0 * (p - d_r) / (p - d_lp))
}

/// `(∏ (t_i + shift))^{1/r} − shift`, computed in log space.
pub fn shifted_geometric_mean(values: &[f64], shift: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean_log = values.iter().map(|v| (v + shift).ln()).sum::<f64>() / values.len() as f64;
    mean_log.exp() - shift
}
