use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{gap_closed, MkpInstance};
use crate::fw::{separate_lazy_afw, separate_vanilla, FwConfig, FwError, SeparationResult, StopReason};
use crate::lifting::{lift_cut, max_excess, OrderPolicy};
use crate::lp::{CutPool, LpError, LpSolver, LpStatus};
use crate::oracle::{reduce_row_with, ReduceOptions};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Minimum violation at the LP point for a cut to enter the LP.
pub const MIN_VIOLATION: f64 = 1e-6;

const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LiftingMode {
    #[default]
    DownUp,
    Down,
    /// No lifting: the reduced cut is used with zero coefficients outside
    /// `S`, which is only valid when nothing was fixed at one.
    None,
}

impl LiftingMode {
    fn policy(self) -> Option<OrderPolicy> {
        match self {
            LiftingMode::DownUp => Some(OrderPolicy::DownThenUp),
            LiftingMode::Down => Some(OrderPolicy::DownOnly),
            LiftingMode::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopConfig {
    pub max_rounds: usize,
    pub lifting: LiftingMode,
    /// Use plain Frank-Wolfe instead of the lazy away-step variant.
    pub vanilla: bool,
    pub threads: usize,
    /// Record wall-clock timings in the report.
    pub timings: bool,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            max_rounds: 1000,
            lifting: LiftingMode::DownUp,
            vanilla: false,
            threads: 1,
            timings: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DriverError {
    #[error("LP relaxation of {0} is infeasible")]
    InfeasibleRelaxation(String),
    #[error("LP became infeasible after the cuts of round {round}: a cut is invalid")]
    InvalidCut { round: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("separation failed on row {row}: {source}")]
    Separation { row: usize, source: FwError },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeparationCounters {
    /// Frank-Wolfe runs.
    pub separator_runs: usize,
    pub separated: usize,
    pub membership: usize,
    pub undecided: usize,
    /// Rows with no fractional variable at the LP point.
    pub rows_integral: usize,
    /// Rows whose fixings at one already exceed the capacity (LP roundoff).
    pub rows_skipped: usize,
    pub rejected_weak: usize,
    pub rejected_duplicate: usize,
    pub rejected_unlifted: usize,
    pub fw_iterations: usize,
    pub oracle_calls: usize,
    pub stop_reasons: BTreeMap<String, usize>,
}

impl SeparationCounters {
    fn new() -> Self {
        Self {
            stop_reasons: StopReason::ALL.iter().map(|r| (r.as_str().to_string(), 0)).collect(),
            ..Self::default()
        }
    }
}

/// Wall-clock seconds, rounded to milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total: f64,
    pub lp: f64,
    pub separation: f64,
    pub lifting: f64,
}

fn secs(d: Duration) -> f64 {
    (d.as_secs_f64() * 1000.0).round() / 1000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRunReport {
    pub schema_version: u32,
    pub instance: String,
    pub block: String,
    pub n: usize,
    pub m: usize,
    pub d_lp: f64,
    pub d_r: f64,
    pub p: Option<f64>,
    pub gap_closed: Option<f64>,
    pub integral_root: bool,
    /// Separation rounds performed.
    pub rounds: usize,
    pub cuts_added: usize,
    pub counters: SeparationCounters,
    /// LP bound after each solve, starting with `d_lp`.
    pub bound_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl RootRunReport {
    pub const CSV_HEADER: [&'static str; 12] = [
        "instance",
        "n",
        "m",
        "gap_closed",
        "time",
        "sepa_time",
        "calls",
        "cuts",
        "d_lp",
        "d_r",
        "p",
        "separator_runs",
    ];

    /// One CSV record in `CSV_HEADER` order. `calls` counts separation
    /// rounds, `cuts` the cuts added to the LP, `separator_runs` the
    /// individual Frank-Wolfe runs.
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        vec![
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            opt(self.gap_closed),
            opt(self.timings.map(|t| t.total)),
            opt(self.timings.map(|t| t.separation)),
            self.rounds.to_string(),
            self.cuts_added.to_string(),
            fmt_num(self.d_lp),
            fmt_num(self.d_r),
            opt(self.p),
            self.counters.separator_runs.to_string(),
        ]
    }
}

/// Fixed six-decimal formatting used in CSV output.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.6}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolCut {
    pub row: usize,
    pub round: usize,
    pub alpha: Vec<f64>,
    pub beta: f64,
    /// Violation at the LP point of the round that produced the cut.
    pub violation: f64,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootRun {
    pub report: RootRunReport,
    pub cuts: Vec<PoolCut>,
}

struct RowWork {
    stats: Option<(SeparationResult, crate::fw::FwStats)>,
    candidate: Option<(Vec<f64>, f64)>,
    unlifted: bool,
    integral: bool,
    skipped: bool,
    sep_time: Duration,
    lift_time: Duration,
}

fn separate_row(
    inst: &MkpInstance,
    row: usize,
    x: &[f64],
    fw: &FwConfig,
    cfg: &LoopConfig,
) -> Result<RowWork, DriverError> {
    let mut work = RowWork {
        stats: None,
        candidate: None,
        unlifted: false,
        integral: false,
        skipped: false,
        sep_time: Duration::ZERO,
        lift_time: Duration::ZERO,
    };
    let options = ReduceOptions {
        integrality_tol: INTEGRALITY_TOL,
        forced_zero: false,
    };
    let red = match reduce_row_with(&inst.weights[row], inst.capacities[row], x, options) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("{}: row {row} skipped: {e}", inst.name);
            work.skipped = true;
            return Ok(work);
        }
    };
    if red.is_empty() {
        work.integral = true;
        return Ok(work);
    }
    let start = Instant::now();
    let outcome = if cfg.vanilla {
        separate_vanilla(&red.target, &red.sub, fw)
    } else {
        separate_lazy_afw(&red.target, &red.sub, fw)
    }
    .map_err(|source| DriverError::Separation { row, source })?;
    work.sep_time = start.elapsed();

    if let Some(cut) = outcome.cut() {
        let start = Instant::now();
        match cfg.lifting.policy() {
            Some(policy) => {
                let lifted = lift_cut(cut, &red.sub, policy);
                work.candidate = Some((lifted.alpha_full, lifted.beta_full));
            }
            None if red.sub.fixed_one.is_empty() => {
                let mut alpha = vec![0.0; x.len()];
                for (&j, &a) in red.sub.index_map.iter().zip(&cut.alpha) {
                    alpha[j] = a;
                }
                work.candidate = Some((alpha, cut.beta));
            }
            None => work.unlifted = true,
        }
        work.lift_time = start.elapsed();
    }
    work.stats = Some((outcome.result, outcome.stats));
    Ok(work)
}

fn is_integral(x: &[f64]) -> bool {
    x.iter().all(|&v| v <= INTEGRALITY_TOL || v >= 1.0 - INTEGRALITY_TOL)
}

/// Root-node loop: solve the LP, separate every knapsack row at the LP point,
/// add the violated (lifted) cuts, repeat until the LP point is integral, a
/// round adds nothing, or the round budget is spent.
pub fn root_cut_loop(inst: &MkpInstance, fw: &FwConfig, cfg: &LoopConfig) -> Result<RootRun, DriverError> {
    let t0 = Instant::now();
    let pool = if cfg.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| DriverError::ThreadPool(e.to_string()))?,
        )
    } else {
        None
    };
    let mut lp_time = Duration::ZERO;
    let mut sep_time = Duration::ZERO;
    let mut lift_time = Duration::ZERO;
    let mut counters = SeparationCounters::new();
    let mut cuts = Vec::new();
    let mut cut_pool = CutPool::new();

    let t = Instant::now();
    let mut lp = LpSolver::new(&inst.lp_relaxation())?;
    let mut sol = lp.solve()?;
    lp_time += t.elapsed();
    if sol.status != LpStatus::Optimal {
        return Err(DriverError::InfeasibleRelaxation(inst.name.clone()));
    }
    let d_lp = sol.objective_value;
    let integral_root = is_integral(&sol.x);
    let mut history = vec![d_lp];
    let mut rounds = 0;

    while !is_integral(&sol.x) && rounds < cfg.max_rounds {
        rounds += 1;
        let x = sol.x.clone();
        let rows: Vec<usize> = (0..inst.m).collect();
        let run_row = |&i: &usize| separate_row(inst, i, &x, fw, cfg);
        let results: Vec<Result<RowWork, DriverError>> = match &pool {
            Some(p) => p.install(|| rows.par_iter().map(run_row).collect()),
            None => rows.iter().map(run_row).collect(),
        };
        let mut added = 0;
        for (row, work) in results.into_iter().enumerate() {
            let work = work?;
            sep_time += work.sep_time;
            lift_time += work.lift_time;
            counters.rows_integral += work.integral as usize;
            counters.rows_skipped += work.skipped as usize;
            counters.rejected_unlifted += work.unlifted as usize;
            let Some((result, stats)) = work.stats else { continue };
            counters.separator_runs += 1;
            counters.fw_iterations += stats.iterations;
            counters.oracle_calls += stats.oracle_calls;
            let reason = stats.stop_reason.expect("finished run");
            *counters.stop_reasons.entry(reason.as_str().to_string()).or_default() += 1;
            match result {
                SeparationResult::Membership { .. } => counters.membership += 1,
                SeparationResult::Undecided { .. } => counters.undecided += 1,
                SeparationResult::Separated { .. } => counters.separated += 1,
            }
            let Some((alpha, beta)) = work.candidate else { continue };
            let violation = crate::fw::dot(&alpha, &x) - beta;
            if violation < MIN_VIOLATION {
                counters.rejected_weak += 1;
                continue;
            }
            if !cut_pool.insert(&alpha, beta) {
                counters.rejected_duplicate += 1;
                continue;
            }
            lp.add_row(alpha.clone(), beta)?;
            cuts.push(PoolCut {
                row,
                round: rounds,
                alpha,
                beta,
                violation,
                stop_reason: reason,
            });
            added += 1;
        }
        if added == 0 {
            break;
        }
        let t = Instant::now();
        sol = lp.solve()?;
        lp_time += t.elapsed();
        if sol.status != LpStatus::Optimal {
            return Err(DriverError::InvalidCut { round: rounds });
        }
        history.push(sol.objective_value);
    }

    let d_r = sol.objective_value;
    let p = inst.known_optimum.map(|v| v as f64);
    let gap = match p {
        Some(p) if !integral_root => gap_closed(p, d_lp, d_r).ok(),
        _ => None,
    };
    let timings = cfg.timings.then(|| Timings {
        total: secs(t0.elapsed()),
        lp: secs(lp_time),
        separation: secs(sep_time),
        lifting: secs(lift_time),
    });
    let report = RootRunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: inst.name.clone(),
        block: inst.block(),
        n: inst.n,
        m: inst.m,
        d_lp,
        d_r,
        p,
        gap_closed: gap,
        integral_root,
        rounds,
        cuts_added: cuts.len(),
        counters,
        bound_history: history,
        timings,
    };
    Ok(RootRun { report, cuts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl AuditCheck {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub instance: String,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

/// Post-hoc checks of a finished run that do not trust the separator:
/// every pooled cut is re-validated against its row by exact DP.
pub fn audit_run(inst: &MkpInstance, run: &RootRun) -> AuditReport {
    const TOL: f64 = 1e-6;
    let mut validity = AuditCheck::new("cut-validity");
    let mut violation = AuditCheck::new("cut-violation");
    for (k, cut) in run.cuts.iter().enumerate() {
        let excess = max_excess(&cut.alpha, cut.beta, &inst.weights[cut.row], inst.capacities[cut.row]);
        validity.record(excess <= TOL, || {
            format!("cut {k} (row {}, round {}) exceeded by {excess:.3e}", cut.row, cut.round)
        });
        violation.record(cut.violation >= MIN_VIOLATION, || {
            format!("cut {k} violated by only {:.3e}", cut.violation)
        });
    }
    let mut monotone = AuditCheck::new("bound-monotone");
    for w in run.report.bound_history.windows(2) {
        monotone.record(w[1] <= w[0] + TOL, || format!("bound rose from {} to {}", w[0], w[1]));
    }
    let mut sandwich = AuditCheck::new("lp-sandwich");
    if let Some(p) = run.report.p {
        for &d in &run.report.bound_history {
            sandwich.record(d >= p - TOL && d <= run.report.d_lp + TOL, || {
                format!("bound {d} outside [{p}, {}]", run.report.d_lp)
            });
        }
    }
    let mut range = AuditCheck::new("gap-closed-range");
    if let Some(g) = run.report.gap_closed {
        range.record((-TOL..=100.0 + TOL).contains(&g), || format!("gap closed {g}"));
    }
    AuditReport {
        instance: inst.name.clone(),
        checks: vec![validity, violation, monotone, sandwich, range],
    }
}
