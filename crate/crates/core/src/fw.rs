//! Separation by projection: Frank-Wolfe over a polytope given only through
//! a linear minimization oracle.
//!
//! Both solvers minimize `f(y) = ½‖y − x̃‖²` over `conv(vertices)`. Whenever
//! a true oracle vertex `v` for the iterate `y` is known, the inequality
//! `<x̃ − y, x> <= <x̃ − y, v>` is valid for every vertex, and it cuts off `x̃`
//! with margin at least `f(y)` as soon as `<y − x̃, y − v> < f(y)`. That test
//! is the early-termination rule used by both solvers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{dot_vertex, LinearOracle, OracleError, Vertex};

/// Absolute tolerance for geometric comparisons.
pub const GEOM_TOL: f64 = 1e-9;

/// Weight below which an active-set entry is dropped.
const DROP_WEIGHT: f64 = 1e-12;

/// Drift of the active-set weights that indicates a bug rather than roundoff.
const WEIGHT_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FwError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("target point has a non-finite entry at {0}")]
    NonFiniteTarget(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("active set inconsistent: weights sum to {weight_sum}")]
    InternalConsistency { weight_sum: f64 },
}

/// The point `x̃` to separate, in the oracle's (reduced) space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetPoint(Vec<f64>);

impl TargetPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, FwError> {
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(FwError::NonFiniteTarget(i));
        }
        Ok(Self(coords))
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for TargetPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// `γ_t = 2/(t+2)`.
    Agnostic,
    /// Closed-form line search on the quadratic objective.
    ExactLineSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FwConfig {
    pub max_iters: usize,
    /// Membership is reported once `f(y) < epsilon`.
    pub epsilon: f64,
    pub step_rule: StepRule,
    /// Divisor applied to the lazification threshold `φ`.
    pub lazification_factor: f64,
    /// Reuse active-set vertices before asking the oracle.
    pub lazy: bool,
    /// Stop as soon as the duality-based criterion certifies non-membership.
    pub early_stop: bool,
    /// Stop when a true Frank-Wolfe gap falls to or below this value.
    pub gap_tolerance: f64,
}

impl Default for FwConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            epsilon: 1e-9,
            step_rule: StepRule::ExactLineSearch,
            lazification_factor: 2.0,
            lazy: true,
            early_stop: true,
            gap_tolerance: 0.0,
        }
    }
}

impl FwConfig {
    pub fn validate(&self) -> Result<(), FwError> {
        if self.max_iters < 1 {
            return Err(FwError::InvalidConfig("max_iters must be at least 1"));
        }
        if !(self.epsilon > 0.0) {
            return Err(FwError::InvalidConfig("epsilon must be positive"));
        }
        if !(self.lazification_factor > 1.0) {
            return Err(FwError::InvalidConfig("lazification factor must exceed 1"));
        }
        if !(self.gap_tolerance >= 0.0) {
            return Err(FwError::InvalidConfig("gap tolerance must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutSource {
    /// Derived from a Frank-Wolfe gap that fell below the tolerance (or from
    /// the last iterate at the iteration limit).
    FwConverged,
    /// Derived from the early-termination criterion.
    EarlyStop,
    /// Lifted from a reduced-space cut.
    Lifted,
}

/// `<alpha, x> <= beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub violation_at_target: f64,
    pub source: CutSource,
}

impl Cut {
    /// `<alpha, x> - beta`; positive means `x` is cut off.
    pub fn violation(&self, x: &[f64]) -> f64 {
        dot(&self.alpha, x) - self.beta
    }

    /// Same inequality scaled so that `max |alpha_j| = 1`.
    pub fn normalized_inf(&self) -> Cut {
        let scale = self.alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if scale == 0.0 {
            return self.clone();
        }
        Cut {
            alpha: self.alpha.iter().map(|a| a / scale).collect(),
            beta: self.beta / scale,
            violation_at_target: self.violation_at_target / scale,
            source: self.source,
        }
    }

    /// The cut `<x̃ − y, x> <= <x̃ − y, v>` for an oracle vertex `v`.
    fn from_vertex(target: &[f64], iterate: &[f64], vertex: &[u8], source: CutSource) -> Cut {
        let alpha: Vec<f64> = target.iter().zip(iterate).map(|(t, y)| t - y).collect();
        let beta = dot_vertex(&alpha, vertex);
        let violation_at_target = dot(&alpha, target) - beta;
        Cut {
            alpha,
            beta,
            violation_at_target,
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    EpsilonMembership,
    EarlyCriterion,
    ZeroGradient,
    GapTolerance,
    IterationLimit,
}

impl StopReason {
    pub const ALL: [StopReason; 5] = [
        StopReason::EpsilonMembership,
        StopReason::EarlyCriterion,
        StopReason::ZeroGradient,
        StopReason::GapTolerance,
        StopReason::IterationLimit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::EpsilonMembership => "epsilon-membership",
            StopReason::EarlyCriterion => "early-criterion",
            StopReason::ZeroGradient => "zero-gradient",
            StopReason::GapTolerance => "gap-tolerance",
            StopReason::IterationLimit => "iteration-limit",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FwStats {
    pub iterations: usize,
    /// Calls that reached the oracle, including the initial vertex.
    pub oracle_calls: usize,
    pub lazy_hits: usize,
    pub away_steps: usize,
    pub drop_steps: usize,
    pub dual_steps: usize,
    /// Oracle calls made only to confirm a possible early stop.
    pub confirm_calls: usize,
    pub stop_reason: Option<StopReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum SeparationResult {
    Membership { final_f: f64 },
    Separated { cut: Cut },
    /// Neither certificate was reached (iteration limit or a converged gap
    /// that does not separate).
    Undecided { final_f: f64, fw_gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationOutcome {
    #[serde(flatten)]
    pub result: SeparationResult,
    pub stats: FwStats,
    /// The iterate at which the run stopped.
    pub iterate: Vec<f64>,
}

impl SeparationOutcome {
    pub fn cut(&self) -> Option<&Cut> {
        match &self.result {
            SeparationResult::Separated { cut } => Some(cut),
            _ => None,
        }
    }

    pub fn is_membership(&self) -> bool {
        matches!(self.result, SeparationResult::Membership { .. })
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stats.stop_reason.expect("finished runs carry a stop reason")
    }
}

/// `T = ceil(8·D²/dist² − 3)`, floored at 1: the number of vanilla
/// Frank-Wolfe iterations after which non-membership is certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceBound {
    pub diameter_sq: f64,
    pub dist_sq: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("distance is zero: the point lies in the polytope and no bound applies")]
    ZeroDistance,
    #[error("diameter must be positive")]
    NonPositiveDiameter,
}

impl ConvergenceBound {
    pub fn iterations(&self) -> Result<u64, BoundError> {
        iteration_bound(self.diameter_sq, self.dist_sq)
    }
}

pub fn iteration_bound(diameter_sq: f64, dist_sq: f64) -> Result<u64, BoundError> {
    if !(dist_sq > 0.0) {
        return Err(BoundError::ZeroDistance);
    }
    if !(diameter_sq > 0.0) {
        return Err(BoundError::NonPositiveDiameter);
    }
    let t = (8.0 * diameter_sq / dist_sq - 3.0).ceil();
    Ok(t.max(1.0) as u64)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn objective(iterate: &[f64], target: &[f64]) -> f64 {
    0.5 * iterate
        .iter()
        .zip(target)
        .map(|(y, x)| (y - x) * (y - x))
        .sum::<f64>()
}

/// `<y − x̃, y − v>` where `y − x̃` is the gradient of `f` at `y`.
pub fn fw_gap(iterate: &[f64], target: &TargetPoint, lmo_vertex: &[u8]) -> Result<f64, FwError> {
    let k = target.dim();
    for got in [iterate.len(), lmo_vertex.len()] {
        if got != k {
            return Err(FwError::DimensionMismatch { expected: k, got });
        }
    }
    Ok(iterate
        .iter()
        .zip(target.iter())
        .zip(lmo_vertex)
        .map(|((y, x), &v)| (y - x) * (y - v as f64))
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EarlyStopCheck {
    pub fires: bool,
    pub cut: Option<Cut>,
}

/// Evaluate `<y − x̃, y − v> < ½‖x̃ − y‖²`. When it holds and `v` is a true
/// oracle minimizer for the gradient at `y`, the returned cut is valid for
/// the whole polytope and violated at `x̃` by at least `½‖x̃ − y‖²`.
pub fn early_stop_check(iterate: &[f64], target: &TargetPoint, candidate: &[u8]) -> EarlyStopCheck {
    assert_eq!(iterate.len(), target.dim(), "iterate dimension");
    assert_eq!(candidate.len(), target.dim(), "vertex dimension");
    let gap: f64 = iterate
        .iter()
        .zip(target.iter())
        .zip(candidate)
        .map(|((y, x), &v)| (y - x) * (y - v as f64))
        .sum();
    let fires = gap < objective(iterate, target);
    EarlyStopCheck {
        fires,
        cut: fires.then(|| Cut::from_vertex(target, iterate, candidate, CutSource::EarlyStop)),
    }
}

/// Explicit convex combination of oracle vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    entries: Vec<(f64, Vertex)>,
    iterate: Vec<f64>,
}

impl ActiveSet {
    pub fn from_vertex(vertex: Vertex) -> Self {
        let iterate = vertex.iter().map(|&b| b as f64).collect();
        Self {
            entries: vec![(1.0, vertex)],
            iterate,
        }
    }

    pub fn entries(&self) -> &[(f64, Vertex)] {
        &self.entries
    }

    pub fn iterate(&self) -> &[f64] {
        &self.iterate
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.entries.iter().map(|(w, _)| w).sum()
    }

    /// Indices of the entries minimizing and maximizing `<grad, v>`; the
    /// earliest inserted entry wins ties.
    pub fn extremes(&self, grad: &[f64]) -> (usize, usize) {
        let mut lo = (0, f64::INFINITY);
        let mut hi = (0, f64::NEG_INFINITY);
        for (i, (_, v)) in self.entries.iter().enumerate() {
            let s = dot_vertex(grad, v);
            if s < lo.1 {
                lo = (i, s);
            }
            if s > hi.1 {
                hi = (i, s);
            }
        }
        (lo.0, hi.0)
    }

    /// Move towards `vertex`: `y ← (1 − γ) y + γ v`.
    fn step_towards(&mut self, vertex: &[u8], gamma: f64) -> Result<(), FwError> {
        if gamma >= 1.0 - DROP_WEIGHT {
            *self = ActiveSet::from_vertex(vertex.to_vec());
            return Ok(());
        }
        for (w, _) in &mut self.entries {
            *w *= 1.0 - gamma;
        }
        match self.entries.iter_mut().find(|(_, v)| v.as_slice() == vertex) {
            Some((w, _)) => *w += gamma,
            None => self.entries.push((gamma, vertex.to_vec())),
        }
        self.refresh()
    }

    /// Move away from entry `idx`: `y ← (1 + γ) y − γ v_A`. Returns true
    /// when the entry was dropped.
    fn step_away(&mut self, idx: usize, gamma: f64, gamma_max: f64) -> Result<bool, FwError> {
        for (w, _) in &mut self.entries {
            *w *= 1.0 + gamma;
        }
        self.entries[idx].0 -= gamma;
        let dropped = gamma >= gamma_max || self.entries[idx].0 < DROP_WEIGHT;
        if dropped {
            self.entries.remove(idx);
        }
        self.refresh()?;
        Ok(dropped)
    }

    fn refresh(&mut self) -> Result<(), FwError> {
        self.entries.retain(|(w, _)| *w >= DROP_WEIGHT);
        let sum = self.weight_sum();
        if (sum - 1.0).abs() > WEIGHT_DRIFT_LIMIT {
            return Err(FwError::InternalConsistency { weight_sum: sum });
        }
        for (w, _) in &mut self.entries {
            *w /= sum;
        }
        self.iterate.iter_mut().for_each(|y| *y = 0.0);
        for (w, v) in &self.entries {
            for (y, &b) in self.iterate.iter_mut().zip(v) {
                if b != 0 {
                    *y += w;
                }
            }
        }
        Ok(())
    }
}

fn check_inputs<O: LinearOracle + ?Sized>(
    target: &TargetPoint,
    oracle: &O,
    config: &FwConfig,
) -> Result<(), FwError> {
    config.validate()?;
    if oracle.dim() != target.dim() {
        return Err(FwError::DimensionMismatch {
            expected: oracle.dim(),
            got: target.dim(),
        });
    }
    Ok(())
}

fn neg(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

/// Step along `d` from `y` minimizing `½‖y + γd − x̃‖²`, clamped to `[0, γmax]`.
fn line_search(target: &[f64], iterate: &[f64], direction: &[f64], gamma_max: f64) -> f64 {
    let dd = dot(direction, direction);
    if dd <= 0.0 {
        return 0.0;
    }
    let num: f64 = target
        .iter()
        .zip(iterate)
        .zip(direction)
        .map(|((x, y), d)| (x - y) * d)
        .sum();
    (num / dd).clamp(0.0, gamma_max)
}

fn step_size(
    rule: StepRule,
    t: usize,
    target: &[f64],
    iterate: &[f64],
    direction: &[f64],
    gamma_max: f64,
) -> f64 {
    match rule {
        StepRule::Agnostic => (2.0 / (t as f64 + 2.0)).min(gamma_max),
        StepRule::ExactLineSearch => line_search(target, iterate, direction, gamma_max),
    }
}

struct Run<'a> {
    target: &'a TargetPoint,
    config: &'a FwConfig,
    stats: FwStats,
}

impl Run<'_> {
    fn finish(mut self, result: SeparationResult, reason: StopReason, iterate: &[f64]) -> SeparationOutcome {
        self.stats.stop_reason = Some(reason);
        SeparationOutcome {
            result,
            stats: self.stats,
            iterate: iterate.to_vec(),
        }
    }

    /// Checks that need no oracle answer. Returns a membership outcome when
    /// the iterate is within `epsilon` of the target.
    fn membership(self, y: &[f64], f: f64) -> Result<SeparationOutcome, Self> {
        if f < self.config.epsilon {
            return Ok(self.finish(SeparationResult::Membership { final_f: f }, StopReason::EpsilonMembership, y));
        }
        Err(self)
    }

    /// Stopping tests on a true oracle vertex `v` with gap `g`.
    fn certify(self, y: &[f64], f: f64, v: &[u8], g: f64) -> Result<SeparationOutcome, Self> {
        if self.config.early_stop && g < f {
            let cut = Cut::from_vertex(self.target, y, v, CutSource::EarlyStop);
            return Ok(self.finish(SeparationResult::Separated { cut }, StopReason::EarlyCriterion, y));
        }
        if g <= self.config.gap_tolerance {
            return Ok(self.conclude(y, f, v, g, StopReason::GapTolerance));
        }
        Err(self)
    }

    /// Final answer from a true vertex when no certificate fired: the cut
    /// through `v` is still valid and is returned when it separates.
    fn conclude(self, y: &[f64], f: f64, v: &[u8], g: f64, reason: StopReason) -> SeparationOutcome {
        let cut = Cut::from_vertex(self.target, y, v, CutSource::FwConverged);
        if cut.violation_at_target > GEOM_TOL {
            self.finish(SeparationResult::Separated { cut }, reason, y)
        } else {
            self.finish(SeparationResult::Undecided { final_f: f, fw_gap: g }, reason, y)
        }
    }
}

/// Vanilla Frank-Wolfe from the vertex maximizing `<x̃, v>`, one oracle call
/// per iteration.
pub fn separate_vanilla<O: LinearOracle + ?Sized>(
    target: &TargetPoint,
    oracle: &O,
    config: &FwConfig,
) -> Result<SeparationOutcome, FwError> {
    check_inputs(target, oracle, config)?;
    let x = target.as_slice();
    let mut run = Run {
        target,
        config,
        stats: FwStats::default(),
    };
    let mut y: Vec<f64> = oracle.minimize(&neg(x))?.iter().map(|&b| b as f64).collect();
    run.stats.oracle_calls = 1;
    let mut direction = vec![0.0; x.len()];
    for t in 0..=config.max_iters {
        run.stats.iterations = t;
        let grad: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        let f = 0.5 * dot(&grad, &grad);
        run = match run.membership(&y, f) {
            Ok(done) => return Ok(done),
            Err(run) => run,
        };
        if dot(&grad, &grad) == 0.0 {
            return Ok(run.finish(SeparationResult::Membership { final_f: f }, StopReason::ZeroGradient, &y));
        }
        let v = oracle.minimize(&grad)?;
        run.stats.oracle_calls += 1;
        let g = dot(&grad, &y) - dot_vertex(&grad, &v);
        if t == config.max_iters {
            if config.early_stop && g < f {
                let cut = Cut::from_vertex(target, &y, &v, CutSource::EarlyStop);
                return Ok(run.finish(SeparationResult::Separated { cut }, StopReason::EarlyCriterion, &y));
            }
            return Ok(run.conclude(&y, f, &v, g, StopReason::IterationLimit));
        }
        run = match run.certify(&y, f, &v, g) {
            Ok(done) => return Ok(done),
            Err(run) => run,
        };
        for ((d, &vi), yi) in direction.iter_mut().zip(&v).zip(&y) {
            *d = vi as f64 - yi;
        }
        let gamma = step_size(config.step_rule, t, x, &y, &direction, 1.0);
        for (yi, d) in y.iter_mut().zip(&direction) {
            *yi += gamma * d;
        }
    }
    unreachable!("the final iteration always returns")
}

enum Step {
    Towards { vertex: Vertex, gamma_max: f64 },
    Away { idx: usize, gamma_max: f64 },
    Dual,
}

/// Lazy away-step Frank-Wolfe with an explicit active set.
///
/// The early-termination test is only evaluated against true oracle
/// answers. Iterations that take a lazy or away step issue one confirming
/// oracle call when the best cached vertex leaves the test open, i.e. when
/// `<∇f(y), y − v_L> < f(y)`; otherwise the true gap is at least `f(y)` and
/// the test cannot fire.
pub fn separate_lazy_afw<O: LinearOracle + ?Sized>(
    target: &TargetPoint,
    oracle: &O,
    config: &FwConfig,
) -> Result<SeparationOutcome, FwError> {
    check_inputs(target, oracle, config)?;
    let x = target.as_slice();
    let k = x.len();
    let mut run = Run {
        target,
        config,
        stats: FwStats::default(),
    };
    let mut active = ActiveSet::from_vertex(oracle.minimize(&neg(x))?);
    run.stats.oracle_calls = 1;

    let grad0: Vec<f64> = active.iterate().iter().zip(x).map(|(a, b)| a - b).collect();
    let v0 = oracle.minimize(&grad0)?;
    run.stats.oracle_calls += 1;
    let mut phi = dot(&grad0, active.iterate()) - dot_vertex(&grad0, &v0);
    let mut pending = Some(v0);

    let mut grad = vec![0.0; k];
    let mut direction = vec![0.0; k];
    for t in 0..=config.max_iters {
        run.stats.iterations = t;
        let y = active.iterate().to_vec();
        for ((g, yi), xi) in grad.iter_mut().zip(&y).zip(x) {
            *g = yi - xi;
        }
        let f = 0.5 * dot(&grad, &grad);
        run = match run.membership(&y, f) {
            Ok(done) => return Ok(done),
            Err(run) => run,
        };
        if dot(&grad, &grad) == 0.0 {
            return Ok(run.finish(SeparationResult::Membership { final_f: f }, StopReason::ZeroGradient, &y));
        }

        let grad_y = dot(&grad, &y);
        let (il, ia) = active.extremes(&grad);
        let lazy_gap = grad_y - dot_vertex(&grad, &active.entries()[il].1);
        let away_gap = dot_vertex(&grad, &active.entries()[ia].1) - grad_y;
        let threshold = phi / config.lazification_factor;
        let away_ok = active.len() > 1;

        let mut truth: Option<(Vertex, f64)> = None;
        let ask_oracle = |run: &mut Run| -> Result<(Vertex, f64), FwError> {
            let v = oracle.minimize(&grad)?;
            run.stats.oracle_calls += 1;
            let g = grad_y - dot_vertex(&grad, &v);
            Ok((v, g))
        };

        let step = if t == config.max_iters {
            None
        } else if let Some(v) = pending.take() {
            let g = grad_y - dot_vertex(&grad, &v);
            truth = Some((v.clone(), g));
            Some(Step::Towards { vertex: v, gamma_max: 1.0 })
        } else if config.lazy {
            if lazy_gap >= away_gap.max(threshold) {
                run.stats.lazy_hits += 1;
                Some(Step::Towards {
                    vertex: active.entries()[il].1.clone(),
                    gamma_max: 1.0,
                })
            } else if away_ok && away_gap >= lazy_gap.max(threshold) {
                let lambda = active.entries()[ia].0;
                Some(Step::Away {
                    idx: ia,
                    gamma_max: lambda / (1.0 - lambda),
                })
            } else {
                let (v, g) = ask_oracle(&mut run)?;
                truth = Some((v.clone(), g));
                if g < threshold {
                    phi = g.min(threshold);
                    Some(Step::Dual)
                } else {
                    Some(Step::Towards { vertex: v, gamma_max: 1.0 })
                }
            }
        } else {
            let (v, g) = ask_oracle(&mut run)?;
            truth = Some((v.clone(), g));
            if away_ok && away_gap > g {
                let lambda = active.entries()[ia].0;
                Some(Step::Away {
                    idx: ia,
                    gamma_max: lambda / (1.0 - lambda),
                })
            } else {
                Some(Step::Towards { vertex: v, gamma_max: 1.0 })
            }
        };

        if truth.is_none() && (step.is_none() || (config.early_stop && lazy_gap < f)) {
            if step.is_some() {
                run.stats.confirm_calls += 1;
            }
            truth = Some(ask_oracle(&mut run)?);
        }
        if let Some((v, g)) = &truth {
            if step.is_none() {
                if config.early_stop && *g < f {
                    let cut = Cut::from_vertex(target, &y, v, CutSource::EarlyStop);
                    return Ok(run.finish(SeparationResult::Separated { cut }, StopReason::EarlyCriterion, &y));
                }
                return Ok(run.conclude(&y, f, v, *g, StopReason::IterationLimit));
            }
            run = match run.certify(&y, f, v, *g) {
                Ok(done) => return Ok(done),
                Err(run) => run,
            };
        }

        match step.expect("non-final iterations choose a step") {
            Step::Towards { vertex, gamma_max } => {
                for ((d, &vi), yi) in direction.iter_mut().zip(&vertex).zip(&y) {
                    *d = vi as f64 - yi;
                }
                let gamma = step_size(config.step_rule, t, x, &y, &direction, gamma_max);
                if gamma > 0.0 {
                    active.step_towards(&vertex, gamma)?;
                }
            }
            Step::Away { idx, gamma_max } => {
                run.stats.away_steps += 1;
                let va = active.entries()[idx].1.clone();
                for ((d, &vi), yi) in direction.iter_mut().zip(&va).zip(&y) {
                    *d = yi - vi as f64;
                }
                let gamma = step_size(config.step_rule, t, x, &y, &direction, gamma_max);
                if gamma > 0.0 && active.step_away(idx, gamma, gamma_max)? {
                    run.stats.drop_steps += 1;
                }
            }
            Step::Dual => run.stats.dual_steps += 1,
        }
    }
    unreachable!("the final iteration always returns")
}
