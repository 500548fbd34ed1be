//! Command-line front end. `main.rs` only forwards to [`main`].

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::fw::{separate_lazy_afw, separate_vanilla, FwConfig, FwError, SeparationResult, StepRule, TargetPoint};
use crate::mkp::{
    audit_run, parse_gap, parse_mknap, parse_optima, root_cut_loop, shifted_geometric_mean, AuditCheck, DriverError,
    LiftingMode, LoopConfig, MkpInstance, ParseError, PoolCut, RootRunReport,
};
use crate::oracle::KnapsackSubproblem;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_AUDIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fwcut", version, about = "Local cuts by Frank-Wolfe projection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Separate a point from a single knapsack polytope.
    Separate(SeparateArgs),
    /// Root-node cut loop with gap-closed reporting.
    RootGap(RootGapArgs),
    /// Run the cut loop and re-check its invariants independently.
    Audit(AuditArgs),
    /// Time the cut loop and summarize with shifted geometric means.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepRuleArg {
    Exact,
    Agnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftingArg {
    DownUp,
    Down,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Mknap,
    Gap,
}

#[derive(Debug, Clone, Args)]
pub struct FwArgs {
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = StepRuleArg::Exact)]
    pub step_rule: StepRuleArg,
    /// Always call the oracle instead of reusing active vertices.
    #[arg(long)]
    pub no_lazy: bool,
    /// Plain Frank-Wolfe without an active set.
    #[arg(long)]
    pub vanilla: bool,
}

impl FwArgs {
    pub fn config(&self) -> FwConfig {
        FwConfig {
            max_iters: self.max_iters,
            epsilon: self.epsilon,
            step_rule: match self.step_rule {
                StepRuleArg::Exact => StepRule::ExactLineSearch,
                StepRuleArg::Agnostic => StepRule::Agnostic,
            },
            lazy: !self.no_lazy,
            ..FwConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Instance file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Mknap)]
    pub format: Format,
    /// Known optima, one per instance; overrides file headers.
    #[arg(long)]
    pub optima: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub max_rounds: usize,
    #[arg(long, value_enum, default_value_t = LiftingArg::DownUp)]
    pub lifting: LiftingArg,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

impl InstanceArgs {
    fn loop_config(&self, fw: &FwArgs, timings: bool) -> LoopConfig {
        LoopConfig {
            max_rounds: self.max_rounds,
            lifting: match self.lifting {
                LiftingArg::DownUp => LiftingMode::DownUp,
                LiftingArg::Down => LiftingMode::Down,
                LiftingArg::None => LiftingMode::None,
            },
            vanilla: fw.vanilla,
            threads: self.threads.max(1),
            timings,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    /// Whitespace-separated coordinates of the point.
    pub point: PathBuf,
    /// `k C w1 .. wk`.
    pub knapsack: PathBuf,
    #[command(flatten)]
    pub fw: FwArgs,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RootGapArgs {
    #[command(flatten)]
    pub instances: InstanceArgs,
    #[command(flatten)]
    pub fw: FwArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Leave timings out so that reruns are byte-identical.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub instances: InstanceArgs,
    #[command(flatten)]
    pub fw: FwArgs,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Test hook: append an invalid cut to the first pool before auditing.
    #[arg(long, hide = true)]
    pub inject_invalid_cut: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub instances: InstanceArgs,
    #[command(flatten)]
    pub fw: FwArgs,
    /// Runs per instance; the fastest is kept.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Fw(#[from] FwError),
    #[error("{instance}: {source}")]
    Driver { instance: String, source: DriverError },
    #[error("output: {0}")]
    Output(String),
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Separate(a) => cmd_separate(&a),
        Command::RootGap(a) => cmd_root_gap(&a),
        Command::Audit(a) => cmd_audit(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

struct Sink {
    out: Box<dyn Write>,
    styled: bool,
}

impl Sink {
    fn open(path: Option<&Path>) -> Result<Self, CliError> {
        Ok(match path {
            Some(p) => Sink {
                out: Box::new(io::BufWriter::new(fs::File::create(p).map_err(|source| CliError::Io {
                    path: p.to_path_buf(),
                    source,
                })?)),
                styled: false,
            },
            None => Sink {
                styled: io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none(),
                out: Box::new(io::stdout().lock()),
            },
        })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.out, "{s}").map_err(|e| CliError::Output(e.to_string()))
    }

    fn heading(&mut self, s: &str) -> Result<(), CliError> {
        if self.styled {
            self.line(&format!("\x1b[1m{s}\x1b[0m"))
        } else {
            self.line(s)
        }
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
        self.line(&text)
    }

    fn flush(&mut self) -> Result<(), CliError> {
        self.out.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

fn parse_reals(path: &Path) -> Result<Vec<f64>, CliError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
    text.split_whitespace()
        .enumerate()
        .map(|(i, t)| {
            t.parse::<f64>()
                .map_err(|_| CliError::Input(format!("{}: token {i}: not a number: {t:?}", path.display())))
        })
        .collect()
}

/// `k C w1 .. wk`.
pub fn parse_knapsack(bytes: &[u8]) -> Result<KnapsackSubproblem, String> {
    let text = std::str::from_utf8(bytes).map_err(|_| "not UTF-8".to_string())?;
    let toks: Vec<&str> = text.split_whitespace().collect();
    let num = |i: usize, what: &str| -> Result<u64, String> {
        let t = toks.get(i).ok_or_else(|| format!("token {i}: missing {what}"))?;
        t.parse().map_err(|_| format!("token {i}: {what}: cannot parse {t:?}"))
    };
    let k = num(0, "item count")? as usize;
    let cap = num(1, "capacity")?;
    let weights = (0..k)
        .map(|j| num(2 + j, &format!("w{}", j + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if toks.len() > k + 2 {
        return Err(format!("token {}: trailing data", k + 2));
    }
    Ok(KnapsackSubproblem::new(weights, cap))
}

fn cmd_separate(a: &SeparateArgs) -> Result<i32, CliError> {
    let point = parse_reals(&a.point)?;
    let sub = parse_knapsack(&read(&a.knapsack)?).map_err(|e| CliError::Input(format!("{}: {e}", a.knapsack.display())))?;
    if point.len() != sub.dim() {
        return Err(CliError::Input(format!(
            "point has {} coordinates, knapsack has {} items",
            point.len(),
            sub.dim()
        )));
    }
    let target = TargetPoint::new(point)?;
    let config = a.fw.config();
    let outcome = if a.fw.vanilla {
        separate_vanilla(&target, &sub, &config)?
    } else {
        separate_lazy_afw(&target, &sub, &config)?
    };
    let mut sink = Sink::open(a.out.as_deref())?;
    if a.json {
        sink.json(&outcome)?;
    } else {
        let s = &outcome.stats;
        match &outcome.result {
            SeparationResult::Separated { cut } => {
                let alpha: Vec<String> = cut.alpha.iter().map(|v| format!("{v:.9}")).collect();
                sink.heading("separated")?;
                sink.line(&format!("alpha {}", alpha.join(" ")))?;
                sink.line(&format!("beta {:.9}", cut.beta))?;
                sink.line(&format!("violation {:.3e}", cut.violation_at_target))?;
            }
            SeparationResult::Membership { final_f } => {
                sink.heading("membership")?;
                sink.line(&format!("final_f {final_f:.3e}"))?;
            }
            SeparationResult::Undecided { final_f, fw_gap } => {
                sink.heading("undecided")?;
                sink.line(&format!("final_f {final_f:.3e} fw_gap {fw_gap:.3e}"))?;
            }
        }
        sink.line(&format!(
            "iterations {} oracle_calls {} lazy {} away {} drop {} dual {} stop {}",
            s.iterations,
            s.oracle_calls,
            s.lazy_hits,
            s.away_steps,
            s.drop_steps,
            s.dual_steps,
            outcome.stop_reason().as_str()
        ))?;
    }
    sink.flush()?;
    Ok(match outcome.result {
        SeparationResult::Separated { .. } => EXIT_OK,
        _ => EXIT_NEGATIVE,
    })
}

pub fn load_instances(args: &InstanceArgs) -> Result<Vec<MkpInstance>, CliError> {
    let bytes = read(&args.input)?;
    let parse_err = |source| CliError::Parse {
        path: args.input.clone(),
        source,
    };
    let mut insts = match args.format {
        Format::Mknap => parse_mknap(&bytes).map_err(parse_err)?,
        Format::Gap => parse_gap(&bytes).map_err(parse_err)?,
    };
    if let Some(path) = &args.optima {
        let optima = parse_optima(&read(path)?).map_err(|source| CliError::Parse {
            path: path.clone(),
            source,
        })?;
        if optima.len() != insts.len() {
            return Err(CliError::Input(format!(
                "{}: {} optima for {} instances",
                path.display(),
                optima.len(),
                insts.len()
            )));
        }
        for (inst, opt) in insts.iter_mut().zip(optima) {
            inst.known_optimum = opt;
        }
    }
    let stem = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    for inst in &mut insts {
        inst.name = format!("{stem}-{}", inst.name);
    }
    Ok(insts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockAverage {
    pub block: String,
    pub instances: usize,
    pub gap_closed: Option<f64>,
    pub time: Option<f64>,
    pub sepa_time: Option<f64>,
    pub calls: f64,
    pub cuts: f64,
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, c) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (c > 0).then(|| s / c as f64)
}

/// Averages for blocks with at least two instances, in order of first
/// appearance.
pub fn block_averages(reports: &[RootRunReport]) -> Vec<BlockAverage> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&RootRunReport>> = BTreeMap::new();
    for r in reports {
        if !groups.contains_key(r.block.as_str()) {
            order.push(&r.block);
        }
        groups.entry(&r.block).or_default().push(r);
    }
    order
        .into_iter()
        .filter_map(|b| {
            let rs = &groups[b];
            (rs.len() >= 2).then(|| BlockAverage {
                block: b.to_string(),
                instances: rs.len(),
                gap_closed: mean(rs.iter().filter_map(|r| r.gap_closed)),
                time: mean(rs.iter().filter_map(|r| r.timings.map(|t| t.total))),
                sepa_time: mean(rs.iter().filter_map(|r| r.timings.map(|t| t.separation))),
                calls: mean(rs.iter().map(|r| r.rounds as f64)).unwrap_or(0.0),
                cuts: mean(rs.iter().map(|r| r.cuts_added as f64)).unwrap_or(0.0),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct RootGapDocument<'a> {
    schema_version: u32,
    reports: &'a [RootRunReport],
    block_averages: Vec<BlockAverage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn write_root_gap(
    sink: &mut Sink,
    out: &OutputArgs,
    reports: &[RootRunReport],
    error: Option<String>,
) -> Result<(), CliError> {
    let averages = block_averages(reports);
    if out.json {
        return sink.json(&RootGapDocument {
            schema_version: crate::mkp::REPORT_SCHEMA_VERSION,
            reports,
            block_averages: averages,
            error,
        });
    }
    if out.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(RootRunReport::CSV_HEADER).map_err(csv_err)?;
        for r in reports {
            w.write_record(r.csv_record()).map_err(csv_err)?;
        }
        for a in &averages {
            w.write_record(average_record(a)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        return sink.line(String::from_utf8_lossy(&bytes).trim_end());
    }
    sink.heading(&format!(
        "{:<24} {:>5} {:>4} {:>10} {:>8} {:>8} {:>6} {:>6}",
        "instance", "n", "m", "gap_closed", "time", "sepa", "calls", "cuts"
    ))?;
    let opt = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "-".into());
    for r in reports {
        sink.line(&format!(
            "{:<24} {:>5} {:>4} {:>10} {:>8} {:>8} {:>6} {:>6}",
            r.instance,
            r.n,
            r.m,
            opt(r.gap_closed, 2),
            opt(r.timings.map(|t| t.total), 3),
            opt(r.timings.map(|t| t.separation), 3),
            r.rounds,
            r.cuts_added
        ))?;
    }
    for a in &averages {
        sink.line(&format!(
            "{:<24} {:>5} {:>4} {:>10} {:>8} {:>8} {:>6.1} {:>6.1}",
            format!("avg {} ({})", a.block, a.instances),
            "",
            "",
            opt(a.gap_closed, 2),
            opt(a.time, 3),
            opt(a.sepa_time, 3),
            a.calls,
            a.cuts
        ))?;
    }
    if let Some(e) = error {
        sink.line(&format!("stopped early: {e}"))?;
    }
    Ok(())
}

fn average_record(a: &BlockAverage) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(crate::mkp::fmt_num).unwrap_or_default();
    vec![
        format!("avg:{}", a.block),
        String::new(),
        String::new(),
        opt(a.gap_closed),
        opt(a.time),
        opt(a.sepa_time),
        crate::mkp::fmt_num(a.calls),
        crate::mkp::fmt_num(a.cuts),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
    ]
}

fn cmd_root_gap(a: &RootGapArgs) -> Result<i32, CliError> {
    let insts = load_instances(&a.instances)?;
    let fw = a.fw.config();
    fw.validate()?;
    let cfg = a.instances.loop_config(&a.fw, !a.no_timings);
    let mut reports = Vec::with_capacity(insts.len());
    let mut failure = None;
    for inst in &insts {
        match root_cut_loop(inst, &fw, &cfg) {
            Ok(run) => reports.push(run.report),
            Err(source) => {
                failure = Some(CliError::Driver {
                    instance: inst.name.clone(),
                    source,
                });
                break;
            }
        }
    }
    let mut sink = Sink::open(a.output.out.as_deref())?;
    write_root_gap(&mut sink, &a.output, &reports, failure.as_ref().map(|e| e.to_string()))?;
    sink.flush()?;
    match failure {
        Some(e) => Err(e),
        None => Ok(EXIT_OK),
    }
}

#[derive(Debug, Serialize)]
struct AuditDocument {
    instances: usize,
    passed: bool,
    checks: Vec<AuditCheck>,
}

fn merge_check(into: &mut Vec<AuditCheck>, c: AuditCheck, instance: &str) {
    match into.iter_mut().find(|x| x.name == c.name) {
        Some(x) => {
            x.checked += c.checked;
            x.failed += c.failed;
            if x.first_failure.is_none() {
                x.first_failure = c.first_failure.map(|f| format!("{instance}: {f}"));
            }
        }
        None => {
            let first_failure = c.first_failure.map(|f| format!("{instance}: {f}"));
            into.push(AuditCheck { first_failure, ..c });
        }
    }
}

fn cmd_audit(a: &AuditArgs) -> Result<i32, CliError> {
    let insts = load_instances(&a.instances)?;
    if insts.is_empty() {
        log::warn!("{}: no instances to audit", a.instances.input.display());
    }
    let fw = a.fw.config();
    fw.validate()?;
    let cfg = a.instances.loop_config(&a.fw, false);
    let mut checks: Vec<AuditCheck> = Vec::new();
    for (k, inst) in insts.iter().enumerate() {
        let driver_err = |source| CliError::Driver {
            instance: inst.name.clone(),
            source,
        };
        let mut run = root_cut_loop(inst, &fw, &cfg).map_err(driver_err)?;
        let again = root_cut_loop(inst, &fw, &cfg).map_err(driver_err)?;
        if a.inject_invalid_cut && k == 0 {
            let row = 0;
            let mut alpha = vec![0.0; inst.n];
            alpha.iter_mut().zip(&inst.weights[row]).for_each(|(a, &w)| *a = (w > 0) as u8 as f64);
            run.cuts.push(PoolCut {
                row,
                round: run.report.rounds,
                alpha,
                beta: -1.0,
                violation: 1.0,
                stop_reason: crate::fw::StopReason::EarlyCriterion,
            });
        }
        for c in audit_run(inst, &run).checks {
            merge_check(&mut checks, c, &inst.name);
        }
        let mut det = AuditCheck {
            name: "determinism".into(),
            checked: 1,
            failed: 0,
            first_failure: None,
        };
        if again.report != run.report || (!a.inject_invalid_cut && again.cuts != run.cuts) {
            det.failed = 1;
            det.first_failure = Some("second run differs".into());
        }
        merge_check(&mut checks, det, &inst.name);
    }
    let passed = checks.iter().all(|c| c.failed == 0);
    let mut sink = Sink::open(a.out.as_deref())?;
    if a.json {
        sink.json(&AuditDocument {
            instances: insts.len(),
            passed,
            checks,
        })?;
    } else {
        sink.heading(&format!("audit of {} instance(s)", insts.len()))?;
        for c in &checks {
            let status = if c.failed == 0 { "ok" } else { "FAILED" };
            sink.line(&format!("{:<18} {:>6} checked {:>4} failed  {status}", c.name, c.checked, c.failed))?;
            if let Some(f) = &c.first_failure {
                sink.line(&format!("  first failure: {f}"))?;
            }
        }
    }
    sink.flush()?;
    Ok(if passed { EXIT_OK } else { EXIT_AUDIT_FAILED })
}

#[derive(Debug, Serialize)]
struct BenchRow {
    instance: String,
    time: f64,
    sepa_time: f64,
    lp_time: f64,
    gap_closed: Option<f64>,
    rounds: usize,
    cuts: usize,
    fw_iterations: usize,
    oracle_calls: usize,
}

#[derive(Debug, Serialize)]
struct BenchSummary {
    instances: usize,
    repeat: usize,
    sgm_time: f64,
    sgm_sepa_time: f64,
    mean_gap_closed: Option<f64>,
    total_fw_iterations: usize,
    total_oracle_calls: usize,
    rows: Vec<BenchRow>,
}

fn cmd_bench(a: &BenchArgs) -> Result<i32, CliError> {
    let insts = load_instances(&a.instances)?;
    let fw = a.fw.config();
    fw.validate()?;
    let cfg = a.instances.loop_config(&a.fw, true);
    let mut rows = Vec::with_capacity(insts.len());
    for inst in &insts {
        let mut best: Option<BenchRow> = None;
        for _ in 0..a.repeat.max(1) {
            let start = Instant::now();
            let run = root_cut_loop(inst, &fw, &cfg).map_err(|source| CliError::Driver {
                instance: inst.name.clone(),
                source,
            })?;
            let elapsed = start.elapsed().as_secs_f64();
            let t = run.report.timings.unwrap_or_default();
            if best.as_ref().is_none_or(|b| elapsed < b.time) {
                best = Some(BenchRow {
                    instance: inst.name.clone(),
                    time: elapsed,
                    sepa_time: t.separation,
                    lp_time: t.lp,
                    gap_closed: run.report.gap_closed,
                    rounds: run.report.rounds,
                    cuts: run.report.cuts_added,
                    fw_iterations: run.report.counters.fw_iterations,
                    oracle_calls: run.report.counters.oracle_calls,
                });
            }
        }
        rows.extend(best);
    }
    let times: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let sepa: Vec<f64> = rows.iter().map(|r| r.sepa_time).collect();
    let summary = BenchSummary {
        instances: rows.len(),
        repeat: a.repeat.max(1),
        sgm_time: shifted_geometric_mean(&times, 1.0),
        sgm_sepa_time: shifted_geometric_mean(&sepa, 1.0),
        mean_gap_closed: mean(rows.iter().filter_map(|r| r.gap_closed)),
        total_fw_iterations: rows.iter().map(|r| r.fw_iterations).sum(),
        total_oracle_calls: rows.iter().map(|r| r.oracle_calls).sum(),
        rows,
    };
    let mut sink = Sink::open(a.out.as_deref())?;
    if a.json {
        sink.json(&summary)?;
    } else {
        sink.heading(&format!(
            "{:<24} {:>9} {:>9} {:>10} {:>6} {:>6} {:>10}",
            "instance", "time", "sepa", "gap_closed", "calls", "cuts", "fw_iters"
        ))?;
        for r in &summary.rows {
            sink.line(&format!(
                "{:<24} {:>9.3} {:>9.3} {:>10} {:>6} {:>6} {:>10}",
                r.instance,
                r.time,
                r.sepa_time,
                r.gap_closed.map(|g| format!("{g:.2}")).unwrap_or_else(|| "-".into()),
                r.rounds,
                r.cuts,
                r.fw_iterations
            ))?;
        }
        sink.line(&format!(
            "shifted geometric mean (shift 1): time {:.3} s, sepa {:.3} s over {} instance(s)",
            summary.sgm_time, summary.sgm_sepa_time, summary.instances
        ))?;
    }
    sink.flush()?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knapsack_file() {
        let k = parse_knapsack(b"3 5\n2 3 4\n").unwrap();
        assert_eq!(k.weights, vec![2, 3, 4]);
        assert_eq!(k.capacity, 5);
        assert!(parse_knapsack(b"3 5 2 3").unwrap_err().contains("w3"));
        assert!(parse_knapsack(b"1 5 2 3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn averages_need_two_instances() {
        let mut r = RootRunReport {
            schema_version: 1,
            instance: "a".into(),
            block: "b".into(),
            n: 1,
            m: 1,
            d_lp: 1.0,
            d_r: 1.0,
            p: None,
            gap_closed: Some(10.0),
            integral_root: false,
            rounds: 2,
            cuts_added: 4,
            counters: Default::default(),
            bound_history: vec![],
            timings: None,
        };
        assert!(block_averages(&[r.clone()]).is_empty());
        let mut r2 = r.clone();
        r2.gap_closed = Some(20.0);
        r.rounds = 4;
        let avg = block_averages(&[r, r2]);
        assert_eq!(avg.len(), 1);
        assert_eq!(avg[0].gap_closed, Some(15.0));
        assert_eq!(avg[0].calls, 3.0);
    }
}
