//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
//! hard criterion fails. Criterion 4 is informational.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use fwcut::fw::{
    iteration_bound, separate_lazy_afw, separate_vanilla, FwConfig, SeparationResult, StepRule, TargetPoint,
};
use fwcut::lifting::{default_order, lift_cut_with_order, OrderPolicy};
use fwcut::lp::membership_test;
use fwcut::mkp::{parse_gap, parse_mknap, parse_optima, root_cut_loop, write_mknap, LoopConfig, MkpInstance, RootRun};
use fwcut::oracle::{dot_vertex, enumerate_lmo, knapsack_dp_lmo, knapsack_dp_max, reduce_row_with, KnapsackSubproblem, ReduceOptions};

const TOL: f64 = 1e-9;
const LOOP_TOL: f64 = 1e-6;

struct Outside {
    sub: KnapsackSubproblem,
    points: Vec<Vec<u8>>,
    target: Vec<f64>,
}

struct Board {
    hard_failures: usize,
}

impl Board {
    fn line(&mut self, id: u32, pass: bool, soft: bool, msg: String) {
        let tag = match (pass, soft) {
            (true, _) => "PASS",
            (false, true) => "SOFT-FAIL",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {id}: {msg}");
        if !pass && !soft {
            self.hard_failures += 1;
        }
    }
}

fn random_target<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    if rng.gen_bool(0.3) {
        (0..k).map(|_| rng.gen_range(-0.2..1.2)).collect()
    } else {
        (0..k).map(|_| rng.gen_range(0.0..1.0)).collect()
    }
}

/// Random knapsack targets confirmed outside the hull by the membership LP.
fn outside_suite(count: usize, max_k: usize, seed: u64) -> Vec<Outside> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let k = rng.gen_range(2..=max_k);
        let (w, cap) = random_knapsack(&mut rng, k);
        let points = feasible_points(&w, cap);
        let target = random_target(&mut rng, k);
        let m = membership_test(&target, &points).expect("membership LP");
        if !m.inside {
            out.push(Outside {
                sub: KnapsackSubproblem::new(w, cap),
                points,
                target,
            });
        }
    }
    out
}

fn max_violation(alpha: &[f64], beta: f64, points: &[Vec<u8>]) -> f64 {
    points
        .iter()
        .map(|v| dot(alpha, &as_f64(v)) - beta)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn half_dist_sq(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
}

fn criterion_1(board: &mut Board, suite: &[Outside]) {
    let cfg = FwConfig::default();
    let mut bad = Vec::new();
    let mut spent = Duration::ZERO;
    for (i, case) in suite.iter().enumerate() {
        let target = TargetPoint::new(case.target.clone()).unwrap();
        let start = Instant::now();
        let out = separate_lazy_afw(&target, &case.sub, &cfg).unwrap();
        spent += start.elapsed();
        let Some(cut) = out.cut() else {
            bad.push(format!("#{i}: {:?}", out.stop_reason()));
            continue;
        };
        let excess = max_violation(&cut.alpha, cut.beta, &case.points);
        let f = half_dist_sq(&case.target, &out.iterate);
        let viol = cut.violation(&case.target);
        if excess > TOL || viol < f - TOL {
            bad.push(format!("#{i}: excess {excess:.2e}, violation {viol:.3e} vs f {f:.3e}"));
        }
    }
    let pass = bad.is_empty() && spent.as_secs_f64() < 60.0;
    board.line(
        1,
        pass,
        false,
        format!(
            "{} outside targets (k <= 12): {} failures, separation time {:.2} s{}",
            suite.len(),
            bad.len(),
            spent.as_secs_f64(),
            bad.first().map(|b| format!(", first {b}")).unwrap_or_default()
        ),
    );
}

fn criterion_2(board: &mut Board, suite: &[Outside]) {
    let start = Instant::now();
    let cfg = FwConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut missed = 0;
    let mut inside = 0;
    while inside < 500 {
        let k = rng.gen_range(2..=12);
        let (w, cap) = random_knapsack(&mut rng, k);
        let points = feasible_points(&w, cap);
        let x = random_convex_combination(&mut rng, &points);
        let sub = KnapsackSubproblem::new(w, cap);
        let out = separate_lazy_afw(&TargetPoint::new(x).unwrap(), &sub, &cfg).unwrap();
        inside += 1;
        if !out.is_membership() {
            missed += 1;
        }
    }
    let threshold = (2.0 * cfg.epsilon).sqrt() * 10.0;
    let mut far = 0;
    let mut false_members = 0;
    for case in suite {
        let (dist, _) = hull_distance(&case.target, &case.points);
        if dist <= threshold {
            continue;
        }
        far += 1;
        let out = separate_lazy_afw(&TargetPoint::new(case.target.clone()).unwrap(), &case.sub, &cfg).unwrap();
        if out.is_membership() {
            false_members += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    board.line(
        2,
        missed == 0 && false_members == 0 && far >= 500 && secs < 60.0,
        false,
        format!(
            "{inside} convex combinations: {missed} not reported as members; \
             {far} targets at distance > {threshold:.2e}: {false_members} reported as members ({secs:.2} s)"
        ),
    );
}

fn criterion_3(board: &mut Board) {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    while checked < 100 {
        let k = rng.gen_range(2..=10);
        let (w, cap) = random_knapsack(&mut rng, k);
        let points = feasible_points(&w, cap);
        let target = random_target(&mut rng, k);
        let (dist, _) = hull_distance(&target, &points);
        // a single feasible point has no diameter to bound with
        if dist < 1e-3 || points.len() < 2 {
            continue;
        }
        let d2 = diameter_sq(&points);
        let bound = iteration_bound(d2, dist * dist).unwrap();
        let cfg = FwConfig {
            step_rule: StepRule::Agnostic,
            max_iters: bound as usize + 1,
            ..FwConfig::default()
        };
        let sub = KnapsackSubproblem::new(w, cap);
        let out = separate_vanilla(&TargetPoint::new(target).unwrap(), &sub, &cfg).unwrap();
        checked += 1;
        let ok = matches!(out.result, SeparationResult::Separated { .. }) && out.stats.iterations as u64 <= bound;
        worst_ratio = worst_ratio.max(out.stats.iterations as f64 / bound as f64);
        if !ok {
            bad.push(format!("iterations {} vs bound {bound} ({:?})", out.stats.iterations, out.stop_reason()));
        }
    }
    board.line(
        3,
        bad.is_empty(),
        false,
        format!(
            "{checked} vanilla agnostic runs (k <= 10): {} exceeded the iteration bound, worst iterations/bound {worst_ratio:.3}{}",
            bad.len(),
            bad.first().map(|b| format!(", first {b}")).unwrap_or_default()
        ),
    );
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn criterion_4(board: &mut Board, suite: &[Outside]) {
    let early = FwConfig::default();
    let gap_only = FwConfig {
        early_stop: false,
        gap_tolerance: 2.0 * early.epsilon,
        ..FwConfig::default()
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for case in suite {
        let t = TargetPoint::new(case.target.clone()).unwrap();
        a.push(separate_lazy_afw(&t, &case.sub, &early).unwrap().stats.iterations);
        b.push(separate_lazy_afw(&t, &case.sub, &gap_only).unwrap().stats.iterations);
    }
    let (ma, mb) = (median(a), median(b));
    board.line(
        4,
        ma <= 0.5 * mb,
        true,
        format!("median iterations {ma} with early stop vs {mb} with gap-only stop (target ratio <= 0.5, got {:.3})", ma / mb.max(1.0)),
    );
}

fn criterion_5(board: &mut Board) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut bad = 0;
    let mut lmo_bad = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=16);
        let w: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=30)).collect();
        let cap = rng.gen_range(0..=w.iter().sum::<u64>());
        let profits: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sub = KnapsackSubproblem::new(w.clone(), cap);
        let (value, v) = knapsack_dp_max(&sub, &profits);
        let brute = brute_max(&w, cap, &profits);
        let achieved = dot(&profits, &as_f64(&v));
        if (value - brute).abs() > TOL || (achieved - brute).abs() > TOL || !sub.is_feasible(&v) {
            bad += 1;
        }
        let dp = knapsack_dp_lmo(&sub, &profits);
        let en = enumerate_lmo(k, |x: &[u8]| sub.is_feasible(x), &profits).unwrap();
        if dot_vertex(&profits, &dp) != dot_vertex(&profits, &en) || !sub.is_feasible(&dp) {
            lmo_bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    board.line(
        5,
        bad == 0 && lmo_bad == 0 && secs < 30.0,
        false,
        format!(
            "1000 knapsacks (k <= 16): {lmo_bad} DP/enumeration LMO value mismatches, \
             {bad} DP maximum mismatches against brute force ({secs:.2} s)"
        ),
    );
}

fn criterion_6(board: &mut Board) {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let cfg = FwConfig::default();
    let mut instances = 0;
    let mut lifts = 0;
    let mut bad = Vec::new();
    while instances < 200 {
        let n = rng.gen_range(4..=14);
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
        let total: u64 = w.iter().sum();
        let cap = rng.gen_range(*w.iter().max().unwrap()..total);
        let mut x = vec![0.0; n];
        let mut load = 0;
        for j in 0..n {
            let r: f64 = rng.gen();
            x[j] = if r < 0.25 {
                0.0
            } else if r < 0.45 && load + w[j] <= cap {
                load += w[j];
                1.0
            } else {
                rng.gen_range(0.05..0.95)
            };
        }
        let opts = ReduceOptions {
            forced_zero: false,
            ..ReduceOptions::default()
        };
        let Ok(red) = reduce_row_with(&w, cap, &x, opts) else { continue };
        if red.sub.dim() < 2 {
            continue;
        }
        let out = separate_lazy_afw(&red.target, &red.sub, &cfg).unwrap();
        let Some(cut) = out.cut() else { continue };
        instances += 1;
        let reduced_violation = cut.violation(red.target.as_slice());
        let points = feasible_points(&w, cap);
        for policy in [OrderPolicy::DownThenUp, OrderPolicy::DownOnly] {
            let mut orders = vec![default_order(&red.sub, policy)];
            let mut fixed: Vec<usize> = red.sub.fixed_zero.iter().chain(&red.sub.fixed_one).copied().collect();
            for _ in 0..5 {
                fixed.shuffle(&mut rng);
                orders.push(fixed.clone());
            }
            for order in orders {
                let lifted = lift_cut_with_order(cut, &red.sub, policy, &order).unwrap();
                lifts += 1;
                let excess = max_violation(&lifted.alpha_full, lifted.beta_full, &points);
                let drift = (lifted.violation(&x) - reduced_violation).abs();
                if excess > TOL || drift > TOL {
                    bad.push(format!("{policy:?} order {order:?}: excess {excess:.2e}, violation drift {drift:.2e}"));
                }
            }
        }
    }
    board.line(
        6,
        bad.is_empty(),
        false,
        format!(
            "{instances} reduced cuts (n <= 14), {lifts} liftings over 2 policies x 6 orders: {} failures{}",
            bad.len(),
            bad.first().map(|b| format!(", first {b}")).unwrap_or_default()
        ),
    );
}

fn run_all(instances: &[MkpInstance]) -> Vec<RootRun> {
    let cfg = LoopConfig {
        timings: false,
        ..LoopConfig::default()
    };
    instances
        .iter()
        .map(|inst| root_cut_loop(inst, &FwConfig::default(), &cfg).expect("root cut loop"))
        .collect()
}

fn brute_optimum(inst: &MkpInstance) -> i64 {
    (0u32..1 << inst.n)
        .map(|mask| (0..inst.n).map(|j| ((mask >> j) & 1) as u8).collect::<Vec<u8>>())
        .filter(|x| inst.is_feasible(x))
        .map(|x| inst.value(&x))
        .max()
        .unwrap()
}

fn criterion_7(board: &mut Board, two_var: &[MkpInstance], two_var_runs: &[RootRun], cb: &[MkpInstance], cb_runs: &[RootRun]) {
    let inst = &two_var[0];
    let rep = &two_var_runs[0].report;
    let opt = brute_optimum(inst);
    let small_ok = inst.known_optimum == Some(opt)
        && (rep.d_r - opt as f64).abs() <= LOOP_TOL
        && rep.gap_closed.is_some_and(|g| (g - 100.0).abs() <= LOOP_TOL);

    let mut zero_gap = 0;
    let mut invalid = 0;
    let mut cuts = 0;
    let mut gaps = Vec::new();
    let (mut calls, mut added) = (0usize, 0usize);
    for (inst, run) in cb.iter().zip(cb_runs) {
        for c in &run.cuts {
            cuts += 1;
            let best = dp_reference(&inst.weights[c.row], inst.capacities[c.row], &c.alpha);
            if best > c.beta + LOOP_TOL {
                invalid += 1;
            }
        }
        calls += run.report.rounds;
        added += run.report.cuts_added;
        if let Some(g) = run.report.gap_closed {
            if g <= 0.0 {
                zero_gap += 1;
            }
            gaps.push(g);
        }
    }
    let avg = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
    let block_ok = zero_gap == 0 && invalid == 0 && avg > 0.0 && avg <= 100.0 && gaps.len() == cb.len();
    board.line(
        7,
        small_ok && block_ok,
        false,
        format!(
            "two-variable instance d_r {} (enumerated optimum {opt}), gap closed {}; \
             {} instances n=100 m=5: block average gap closed {avg:.2} (reference 12.54), \
             avg calls {:.1}, avg cuts {:.1}, {zero_gap} fractional roots with no gap closed, {invalid}/{cuts} cuts invalid by DP",
            rep.d_r,
            rep.gap_closed.map(|g| format!("{g:.2}")).unwrap_or("-".into()),
            cb.len(),
            calls as f64 / cb.len() as f64,
            added as f64 / cb.len() as f64,
        ),
    );
}

fn criterion_8(board: &mut Board, runs: &[&RootRun]) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for run in runs {
        let r = &run.report;
        let Some(p) = r.p else { continue };
        checked += 1;
        let monotone = r.bound_history.windows(2).all(|w| w[1] <= w[0] + LOOP_TOL);
        let sandwich = r.d_lp + LOOP_TOL >= r.d_r && r.d_r >= p - LOOP_TOL;
        if !monotone || !sandwich {
            bad.push(format!("{}: d_lp {} d_r {} p {p} monotone {monotone}", r.instance, r.d_lp, r.d_r));
        }
    }
    board.line(
        8,
        bad.is_empty() && checked > 0,
        false,
        format!(
            "{checked} instances with known optimum: {} violate d_lp >= d_r >= p or bound monotonicity{}",
            bad.len(),
            bad.first().map(|b| format!(", first {b}")).unwrap_or_default()
        ),
    );
}

fn criterion_9(board: &mut Board, cb: &[MkpInstance]) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("subset.txt");
    std::fs::write(&path, write_mknap(&cb[..3])).unwrap();
    let gap = data_path("gap_small.txt");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_fwcut")).args(args).output().expect("spawn fwcut");
        (out.status.code(), out.stdout)
    };
    let p = path.to_str().unwrap();
    let g = gap.to_str().unwrap();
    let a = run(&["root-gap", p, "--json", "--no-timings"]);
    let b = run(&["root-gap", p, "--json", "--no-timings"]);
    let c = run(&["root-gap", p, "--json", "--no-timings", "--threads", "4"]);
    let d = run(&["root-gap", g, "--format", "gap", "--json", "--no-timings"]);
    let e = run(&["root-gap", g, "--format", "gap", "--json", "--no-timings"]);
    let ok = a.0 == Some(0) && !a.1.is_empty() && a == b && a == c && d.0 == Some(0) && d == e;
    board.line(
        9,
        ok,
        false,
        format!(
            "root-gap --json --no-timings byte-identical across repeated runs and thread counts ({} bytes, exit {:?})",
            a.1.len(),
            a.0
        ),
    );
}

fn load(name: &str) -> Vec<u8> {
    std::fs::read(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn main() {
    let mut board = Board { hard_failures: 0 };
    let start = Instant::now();

    let suite = outside_suite(500, 12, 11);
    let wide = outside_suite(600, 12, 12);
    criterion_1(&mut board, &suite);
    criterion_2(&mut board, &wide);
    criterion_3(&mut board);
    criterion_4(&mut board, &suite);
    criterion_5(&mut board);
    criterion_6(&mut board);

    let two_var = parse_mknap(&load("two_var.txt")).unwrap();
    let cb = parse_mknap(&load("chu_beasley_100_5_25.txt")).unwrap();
    let mut gap = parse_gap(&load("gap_small.txt")).unwrap();
    for (inst, opt) in gap.iter_mut().zip(parse_optima(&load("gap_small.opt")).unwrap()) {
        inst.known_optimum = opt;
    }
    let two_var_runs = run_all(&two_var);
    let cb_runs = run_all(&cb);
    let gap_runs = run_all(&gap);
    criterion_7(&mut board, &two_var, &two_var_runs, &cb, &cb_runs);
    let all: Vec<&RootRun> = two_var_runs.iter().chain(&cb_runs).chain(&gap_runs).collect();
    criterion_8(&mut board, &all);
    criterion_9(&mut board, &cb);

    println!(
        "acceptance: {} hard failures, {:.1} s",
        board.hard_failures,
        start.elapsed().as_secs_f64()
    );
    if board.hard_failures > 0 {
        std::process::exit(1);
    }
}
