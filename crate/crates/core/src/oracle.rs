//! Linear minimization oracles over implicitly described 0/1 polytopes.
//!
//! Two oracles are provided: a brute-force enumeration oracle for arbitrary
//! bounded feasibility predicates (used as a test reference), and a dynamic
//! programming oracle for single-row 0/1 knapsack sets. The knapsack DP is
//! also reused by the lifting routine with real-valued profits.

use thiserror::Error;

use crate::fw::TargetPoint;

/// A 0/1 point returned by an oracle.
pub type Vertex = Vec<u8>;

/// Largest dimension the enumeration oracle accepts.
pub const MAX_ENUMERATION_DIM: usize = 25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration over {dim} variables exceeds the limit of {MAX_ENUMERATION_DIM}")]
    TooLarge { dim: usize },
    #[error("no feasible 0/1 point")]
    Infeasible,
    #[error("direction has length {got}, oracle dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A linear minimization oracle: returns a feasible 0/1 point minimizing
/// `<direction, x>`. Implementations must be reentrant.
pub trait LinearOracle: Sync {
    fn dim(&self) -> usize;

    fn minimize(&self, direction: &[f64]) -> Result<Vertex, OracleError>;
}

impl<T: LinearOracle + ?Sized> LinearOracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vertex, OracleError> {
        (**self).minimize(direction)
    }
}

/// `<a, v>` for a real vector and a 0/1 vertex.
pub fn dot_vertex(a: &[f64], v: &[u8]) -> f64 {
    a.iter()
        .zip(v)
        .filter(|(_, &b)| b != 0)
        .map(|(x, _)| *x)
        .sum()
}

/// Brute-force argmin of `<direction, x>` over all feasible points of
/// `{0,1}^k`. Ties go to the lexicographically smallest vector.
pub fn enumerate_lmo<F>(dim: usize, feasible: F, direction: &[f64]) -> Result<Vertex, OracleError>
where
    F: Fn(&[u8]) -> bool,
{
    if dim > MAX_ENUMERATION_DIM {
        return Err(OracleError::TooLarge { dim });
    }
    if direction.len() != dim {
        return Err(OracleError::DimensionMismatch {
            expected: dim,
            got: direction.len(),
        });
    }
    let mut point = vec![0u8; dim];
    let mut best: Option<(f64, Vertex)> = None;
    // Bit (dim - 1 - i) of the mask is x_i, so increasing masks walk {0,1}^k
    // in lexicographic order and the first strict minimum wins ties.
    for mask in 0u64..(1u64 << dim) {
        for (i, x) in point.iter_mut().enumerate() {
            *x = ((mask >> (dim - 1 - i)) & 1) as u8;
        }
        if !feasible(&point) {
            continue;
        }
        let value = dot_vertex(direction, &point);
        match &best {
            Some((b, _)) if value >= *b => {}
            _ => best = Some((value, point.clone())),
        }
    }
    best.map(|(_, v)| v).ok_or(OracleError::Infeasible)
}

/// Enumeration oracle over an arbitrary feasibility predicate.
pub struct EnumerationOracle<F> {
    dim: usize,
    feasible: F,
}

impl<F> EnumerationOracle<F>
where
    F: Fn(&[u8]) -> bool + Sync,
{
    pub fn new(dim: usize, feasible: F) -> Result<Self, OracleError> {
        if dim > MAX_ENUMERATION_DIM {
            return Err(OracleError::TooLarge { dim });
        }
        Ok(Self { dim, feasible })
    }

    /// All feasible points in lexicographic order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << self.dim) {
            let point: Vertex = (0..self.dim)
                .map(|i| ((mask >> (self.dim - 1 - i)) & 1) as u8)
                .collect();
            if (self.feasible)(&point) {
                out.push(point);
            }
        }
        out
    }
}

impl<F> LinearOracle for EnumerationOracle<F>
where
    F: Fn(&[u8]) -> bool + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vertex, OracleError> {
        enumerate_lmo(self.dim, &self.feasible, direction)
    }
}

/// A single-row 0/1 knapsack, possibly reduced from a larger row.
///
/// `weights` and `capacity` describe the reduced knapsack over the index set
/// `S` (`index_map`). The original row is kept alongside so that cuts over
/// `S` can be lifted back. `fixed_zero`, `fixed_one`, `index_map` and
/// `outside_support` partition the original indices `0..row_weights.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSubproblem {
    pub weights: Vec<u64>,
    pub capacity: u64,
    pub index_map: Vec<usize>,
    pub fixed_zero: Vec<usize>,
    pub fixed_one: Vec<usize>,
    /// Zero-weight positions of the original row; they never interact with
    /// the knapsack and receive coefficient 0 when a cut is lifted.
    pub outside_support: Vec<usize>,
    pub row_weights: Vec<u64>,
    pub row_capacity: u64,
}

impl KnapsackSubproblem {
    /// A standalone knapsack `{x in {0,1}^k : <w, x> <= C}` with no fixings.
    pub fn new(weights: Vec<u64>, capacity: u64) -> Self {
        let k = weights.len();
        Self {
            index_map: (0..k).collect(),
            fixed_zero: Vec::new(),
            fixed_one: Vec::new(),
            outside_support: Vec::new(),
            row_weights: weights.clone(),
            row_capacity: capacity,
            weights,
            capacity,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_feasible(&self, x: &[u8]) -> bool {
        weight_of(&self.weights, x) <= self.capacity
    }

    /// Re-embed a reduced point into the original row: `F1` at 1, `F0` and
    /// off-support positions at 0.
    pub fn embed(&self, reduced: &[u8]) -> Vertex {
        let mut full = vec![0u8; self.row_weights.len()];
        for &j in &self.fixed_one {
            full[j] = 1;
        }
        for (&j, &x) in self.index_map.iter().zip(reduced) {
            full[j] = x;
        }
        full
    }
}

impl LinearOracle for KnapsackSubproblem {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vertex, OracleError> {
        if direction.len() != self.weights.len() {
            return Err(OracleError::DimensionMismatch {
                expected: self.weights.len(),
                got: direction.len(),
            });
        }
        Ok(knapsack_dp_lmo(self, direction))
    }
}

pub(crate) fn weight_of(weights: &[u64], x: &[u8]) -> u64 {
    weights
        .iter()
        .zip(x)
        .filter(|(_, &b)| b != 0)
        .map(|(w, _)| *w)
        .sum()
}

/// Exact `max { <profits, x> : <weights, x> <= capacity, x in {0,1}^k }`.
///
/// Capacity-indexed DP with real-valued profits. Items with non-positive
/// profit are never taken, ties prefer leaving an item out. A negative
/// capacity has an empty feasible set and yields `(0.0, 0)`.
pub fn knapsack_max(weights: &[u64], capacity: i64, profits: &[f64]) -> (f64, Vertex) {
    assert_eq!(weights.len(), profits.len(), "weights/profits length mismatch");
    let k = weights.len();
    let mut solution = vec![0u8; k];
    if capacity < 0 {
        return (0.0, solution);
    }
    let capacity = capacity as u64;
    let items: Vec<usize> = (0..k)
        .filter(|&j| profits[j] > 0.0 && weights[j] <= capacity)
        .collect();
    if items.is_empty() {
        return (0.0, solution);
    }
    let total: u64 = items.iter().map(|&j| weights[j]).sum();
    if total <= capacity {
        let mut value = 0.0;
        for &j in &items {
            solution[j] = 1;
            value += profits[j];
        }
        return (value, solution);
    }
    let cap = capacity as usize;
    let width = cap + 1;
    let mut best = vec![0.0f64; width];
    let mut take = vec![false; items.len() * width];
    for (row, &j) in items.iter().enumerate() {
        let w = weights[j] as usize;
        let p = profits[j];
        let flags = &mut take[row * width..(row + 1) * width];
        for c in (w..width).rev() {
            let candidate = best[c - w] + p;
            if candidate > best[c] {
                best[c] = candidate;
                flags[c] = true;
            }
        }
    }
    let mut c = cap;
    for (row, &j) in items.iter().enumerate().rev() {
        if take[row * width + c] {
            solution[j] = 1;
            c -= weights[j] as usize;
        }
    }
    (best[cap], solution)
}

/// Exact maximization of real profits over the subproblem's knapsack set.
pub fn knapsack_dp_max(sub: &KnapsackSubproblem, profits: &[f64]) -> (f64, Vertex) {
    knapsack_max(&sub.weights, sub.capacity as i64, profits)
}

/// Exact argmin of `<direction, x>` over the subproblem's knapsack set,
/// solved as a maximization with profits `max(0, -direction_j)`.
pub fn knapsack_dp_lmo(sub: &KnapsackSubproblem, direction: &[f64]) -> Vertex {
    let profits: Vec<f64> = direction.iter().map(|&c| (-c).max(0.0)).collect();
    knapsack_max(&sub.weights, sub.capacity as i64, &profits).1
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReduceError {
    #[error("fixings exceed the row capacity by {excess}")]
    InfeasibleFixing { excess: u64 },
    #[error("row has {weights} weights but the point has {point} entries")]
    DimensionMismatch { weights: usize, point: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceOptions {
    /// Distance from 0/1 below which an LP value counts as integral.
    pub integrality_tol: f64,
    /// Move fractional items heavier than the reduced capacity into `F0`.
    pub forced_zero: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            integrality_tol: 1e-6,
            forced_zero: true,
        }
    }
}

/// A reduced knapsack and the matching projection of the LP point.
#[derive(Debug, Clone, PartialEq)]
pub struct RowReduction {
    pub sub: KnapsackSubproblem,
    pub target: TargetPoint,
}

impl RowReduction {
    /// True when no fractional variable is left to separate over.
    pub fn is_empty(&self) -> bool {
        self.sub.is_empty()
    }
}

/// Reduce one knapsack row at an LP point: integral entries are fixed
/// (`F0`/`F1`), fractional entries form `S`, and the capacity drops by the
/// weight fixed at one. Fractional items that no longer fit are forced to
/// zero.
pub fn reduce_row(
    row_weights: &[u64],
    row_capacity: u64,
    lp_point: &[f64],
    integrality_tol: f64,
) -> Result<RowReduction, ReduceError> {
    reduce_row_with(
        row_weights,
        row_capacity,
        lp_point,
        ReduceOptions {
            integrality_tol,
            forced_zero: true,
        },
    )
}

pub fn reduce_row_with(
    row_weights: &[u64],
    row_capacity: u64,
    lp_point: &[f64],
    options: ReduceOptions,
) -> Result<RowReduction, ReduceError> {
    if row_weights.len() != lp_point.len() {
        return Err(ReduceError::DimensionMismatch {
            weights: row_weights.len(),
            point: lp_point.len(),
        });
    }
    let tol = options.integrality_tol;
    let mut fixed_zero = Vec::new();
    let mut fixed_one = Vec::new();
    let mut outside_support = Vec::new();
    let mut fractional = Vec::new();
    for (j, (&w, &x)) in row_weights.iter().zip(lp_point).enumerate() {
        if w == 0 {
            outside_support.push(j);
        } else if x <= tol {
            fixed_zero.push(j);
        } else if x >= 1.0 - tol {
            fixed_one.push(j);
        } else {
            fractional.push(j);
        }
    }
    let fixed_weight: u64 = fixed_one.iter().map(|&j| row_weights[j]).sum();
    if fixed_weight > row_capacity {
        return Err(ReduceError::InfeasibleFixing {
            excess: fixed_weight - row_capacity,
        });
    }
    let capacity = row_capacity - fixed_weight;
    let mut index_map = Vec::with_capacity(fractional.len());
    for j in fractional {
        if options.forced_zero && row_weights[j] > capacity {
            fixed_zero.push(j);
        } else {
            index_map.push(j);
        }
    }
    fixed_zero.sort_unstable();
    let target = TargetPoint::from_vec_unchecked(index_map.iter().map(|&j| lp_point[j]).collect());
    let sub = KnapsackSubproblem {
        weights: index_map.iter().map(|&j| row_weights[j]).collect(),
        capacity,
        index_map,
        fixed_zero,
        fixed_one,
        outside_support,
        row_weights: row_weights.to_vec(),
        row_capacity,
    };
    Ok(RowReduction { sub, target })
}
