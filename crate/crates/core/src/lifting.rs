//! Sequential lifting of reduced-space knapsack cuts back to the full row.
//!
//! A cut `<α, x_S> <= α_0` valid for the reduced knapsack (variables in `F0`
//! fixed at 0, variables in `F1` fixed at 1) becomes
//!
//! ```text
//! Σ_S α_j x_j + Σ_{F1} β_j x_j + Σ_{F0} β_j x_j <= α_0 + Σ_{F1} β_j
//! ```
//!
//! with each `β_j` computed by one knapsack maximization over the variables
//! already in the inequality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fw::{Cut, CutSource};
use crate::oracle::{knapsack_max, KnapsackSubproblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPolicy {
    /// Down-lift `F1` in ascending index order, then up-lift `F0`.
    #[default]
    DownThenUp,
    /// Down-lift `F1` only; `F0` variables keep coefficient 0.
    DownOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedCut {
    pub alpha_full: Vec<f64>,
    pub beta_full: f64,
    /// `β_j` for every lifted index of `F0 ∪ F1`.
    pub lifted_coeffs: BTreeMap<usize, f64>,
    pub order_used: Vec<usize>,
}

impl LiftedCut {
    /// `<alpha_full, x> - beta_full`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        crate::fw::dot(&self.alpha_full, x) - self.beta_full
    }

    pub fn to_cut(&self, x_star: &[f64]) -> Cut {
        Cut {
            alpha: self.alpha_full.clone(),
            beta: self.beta_full,
            violation_at_target: self.violation(x_star),
            source: CutSource::Lifted,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("reduced cut has {got} coefficients, subproblem has {expected} free variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lifting order must be a permutation of the fixed variables; offending index {0}")]
    BadOrder(usize),
}

/// `β_j = rhs − z_j` with `z_j = max { <coeffs, x> : <weights, x> <= capacity − w_j }`.
/// When `w_j > capacity`, `x_j = 1` is infeasible and `z_j = 0`.
pub fn uplift(coeffs: &[f64], weights: &[u64], rhs: f64, capacity: u64, w_j: u64) -> f64 {
    let z = knapsack_max(weights, capacity as i64 - w_j as i64, coeffs).0;
    rhs - z
}

/// Release a fixing `x_j = 1`. `capacity_free` is the capacity once `x_j` is
/// free (i.e. already increased by `w_j`). Returns `(β_j, new_rhs)` where
/// `new_rhs = rhs + β_j = z_j`.
pub fn downlift(coeffs: &[f64], weights: &[u64], rhs: f64, capacity_free: u64) -> (f64, f64) {
    let z = knapsack_max(weights, capacity_free as i64, coeffs).0;
    (z - rhs, z)
}

/// Best value of `Σ coef·x` over the items added so far, for every capacity
/// `0..=max_cap`. Adding an item is one pass over the table.
struct LiftTable {
    best: Vec<f64>,
}

impl LiftTable {
    fn new(max_cap: u64) -> Self {
        Self {
            best: vec![0.0; max_cap as usize + 1],
        }
    }

    fn add(&mut self, weight: u64, coef: f64) {
        if coef <= 0.0 {
            return;
        }
        let w = weight as usize;
        if w >= self.best.len() {
            return;
        }
        for c in (w..self.best.len()).rev() {
            let cand = self.best[c - w] + coef;
            if cand > self.best[c] {
                self.best[c] = cand;
            }
        }
    }

    /// `z` for capacity `cap`; an empty feasible set yields 0.
    fn at(&self, cap: i64) -> f64 {
        if cap < 0 {
            0.0
        } else {
            self.best[(cap as usize).min(self.best.len() - 1)]
        }
    }
}

/// The default order for a policy: `F1` ascending then (unless down-only)
/// `F0` ascending.
pub fn default_order(sub: &KnapsackSubproblem, policy: OrderPolicy) -> Vec<usize> {
    let mut order = sub.fixed_one.clone();
    order.sort_unstable();
    if policy == OrderPolicy::DownThenUp {
        let mut f0 = sub.fixed_zero.clone();
        f0.sort_unstable();
        order.extend(f0);
    }
    order
}

pub fn lift_cut(reduced_cut: &Cut, sub: &KnapsackSubproblem, policy: OrderPolicy) -> LiftedCut {
    lift_cut_with_order(reduced_cut, sub, policy, &default_order(sub, policy))
        .expect("default order is a valid lifting order")
}

/// Lift along an explicit order. `order` must contain every index of `F1`
/// exactly once and, for `DownThenUp`, every index of `F0`; interleaving is
/// allowed. Under `DownOnly`, `F0` indices in `order` are ignored.
pub fn lift_cut_with_order(
    reduced_cut: &Cut,
    sub: &KnapsackSubproblem,
    policy: OrderPolicy,
    order: &[usize],
) -> Result<LiftedCut, LiftError> {
    if reduced_cut.alpha.len() != sub.dim() {
        return Err(LiftError::DimensionMismatch {
            expected: sub.dim(),
            got: reduced_cut.alpha.len(),
        });
    }
    let n = sub.row_weights.len();
    let mut role = vec![0u8; n]; // 1 = F1, 2 = F0
    for &j in &sub.fixed_one {
        role[j] = 1;
    }
    for &j in &sub.fixed_zero {
        role[j] = 2;
    }
    let mut seen = vec![false; n];
    let mut steps = Vec::with_capacity(order.len());
    for &j in order {
        if j >= n || role[j] == 0 || seen[j] {
            return Err(LiftError::BadOrder(j));
        }
        seen[j] = true;
        if role[j] == 2 && policy == OrderPolicy::DownOnly {
            continue;
        }
        steps.push(j);
    }
    let needed = sub.fixed_one.len()
        + match policy {
            OrderPolicy::DownThenUp => sub.fixed_zero.len(),
            OrderPolicy::DownOnly => 0,
        };
    if steps.len() != needed {
        let missing = sub
            .fixed_one
            .iter()
            .chain(&sub.fixed_zero)
            .find(|&&j| !seen[j])
            .copied()
            .unwrap_or(n);
        return Err(LiftError::BadOrder(missing));
    }

    let mut alpha_full = vec![0.0; n];
    let mut table = LiftTable::new(sub.row_capacity);
    for (&j, &a) in sub.index_map.iter().zip(&reduced_cut.alpha) {
        alpha_full[j] = a;
        table.add(sub.row_weights[j], a);
    }
    let mut rhs = reduced_cut.beta;
    let mut cap = sub.capacity as i64;
    let mut lifted_coeffs = BTreeMap::new();
    for &j in &steps {
        let w = sub.row_weights[j];
        let beta = if role[j] == 1 {
            cap += w as i64;
            let z = table.at(cap);
            let beta = z - rhs;
            rhs = z;
            beta
        } else {
            rhs - table.at(cap - w as i64)
        };
        alpha_full[j] = beta;
        lifted_coeffs.insert(j, beta);
        table.add(w, beta);
    }
    Ok(LiftedCut {
        alpha_full,
        beta_full: rhs,
        lifted_coeffs,
        order_used: steps,
    })
}

/// `max { <alpha, x> : <weights, x> <= capacity }` minus `beta`: positive
/// means the inequality is invalid for the row.
pub fn max_excess(alpha: &[f64], beta: f64, weights: &[u64], capacity: u64) -> f64 {
    knapsack_max(weights, capacity as i64, alpha).0 - beta
}
