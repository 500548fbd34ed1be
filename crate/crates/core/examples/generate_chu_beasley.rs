//! Generate Chu-Beasley style MKP instances and solve them exactly.
//!
//!     cargo run --release --example generate_chu_beasley -- [n] [m] [tightness] [count] [seed] [out]
//!
//! Defaults reproduce `data/chu_beasley_100_5_25.txt`. Optima come from a
//! depth-first branch and bound over LP bounds with reduced-cost fixing; the
//! incumbent is verified feasible before it is written to the header.

use std::time::Instant;

use fwcut::lp::{LpProblem, LpSolver, LpStatus};
use fwcut::mkp::{chu_beasley, write_mknap, MkpInstance};

fn greedy(inst: &MkpInstance) -> (i64, Vec<u8>) {
    let mut order: Vec<usize> = (0..inst.n).collect();
    let density = |j: usize| {
        let load: f64 = (0..inst.m).map(|i| inst.weights[i][j] as f64 / inst.capacities[i].max(1) as f64).sum();
        inst.profits[j] as f64 / load.max(1e-12)
    };
    order.sort_by(|&a, &b| density(b).total_cmp(&density(a)));
    let mut x = vec![0u8; inst.n];
    let mut used = vec![0u64; inst.m];
    for j in order {
        if (0..inst.m).all(|i| used[i] + inst.weights[i][j] <= inst.capacities[i]) {
            x[j] = 1;
            for i in 0..inst.m {
                used[i] += inst.weights[i][j];
            }
        }
    }
    (inst.value(&x), x)
}

/// Node LP over the free variables only; fixed ones are substituted out.
/// `fix[j]` is 0, 1 or 2 (free). Returns `None` when the fixings overload
/// a row.
fn node_lp(inst: &MkpInstance, fix: &[u8]) -> Option<(LpProblem, Vec<usize>, f64)> {
    let free: Vec<usize> = (0..inst.n).filter(|&j| fix[j] == 2).collect();
    let mut constant = 0.0;
    let mut caps: Vec<f64> = inst.capacities.iter().map(|&b| b as f64).collect();
    for j in (0..inst.n).filter(|&j| fix[j] == 1) {
        constant += inst.profits[j] as f64;
        for (c, row) in caps.iter_mut().zip(&inst.weights) {
            *c -= row[j] as f64;
        }
    }
    if caps.iter().any(|&c| c < 0.0) {
        return None;
    }
    let mut lp = LpProblem::new(free.iter().map(|&j| inst.profits[j] as f64).collect());
    for (row, &cap) in inst.weights.iter().zip(&caps) {
        lp.add_row(free.iter().map(|&j| row[j] as f64).collect(), cap);
    }
    Some((lp, free, constant))
}

fn solve_exact(inst: &MkpInstance) -> (i64, Vec<u8>, usize) {
    let (mut best, mut best_x) = greedy(inst);
    let mut stack = vec![vec![2u8; inst.n]];
    let mut nodes = 0;
    while let Some(mut fix) = stack.pop() {
        nodes += 1;
        let Some((lp, free, constant)) = node_lp(inst, &fix) else { continue };
        let sol = LpSolver::new(&lp).and_then(|mut s| s.solve()).expect("LP solve");
        if sol.status != LpStatus::Optimal {
            continue;
        }
        let z = sol.objective_value + constant;
        if (z + 1e-6).floor() as i64 <= best {
            continue;
        }
        let frac = sol
            .x
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 1e-6 && v < 1.0 - 1e-6)
            .max_by(|a, b| (0.5 - (a.1 - 0.5).abs()).total_cmp(&(0.5 - (b.1 - 0.5).abs())))
            .map(|(k, _)| k);
        let Some(k) = frac else {
            let mut x: Vec<u8> = fix.iter().map(|&f| (f == 1) as u8).collect();
            for (&j, &v) in free.iter().zip(&sol.x) {
                x[j] = (v > 0.5) as u8;
            }
            if inst.is_feasible(&x) && inst.value(&x) > best {
                best = inst.value(&x);
                best_x = x;
            }
            continue;
        };

        // reduced-cost fixing against the incumbent
        let y = sol.duals.as_ref().expect("optimal LP has duals");
        let slack = z - (best as f64 + 1.0);
        for (k2, &j) in free.iter().enumerate() {
            if k2 == k {
                continue;
            }
            let d = inst.profits[j] as f64 - (0..inst.m).map(|i| y[i] * inst.weights[i][j] as f64).sum::<f64>();
            if sol.x[k2] <= 1e-9 && -d > slack + 1e-7 {
                fix[j] = 0;
            } else if sol.x[k2] >= 1.0 - 1e-9 && d > slack + 1e-7 {
                fix[j] = 1;
            }
        }
        let j = free[k];
        let mut zero = fix.clone();
        zero[j] = 0;
        fix[j] = 1;
        stack.push(zero);
        stack.push(fix);
    }
    (best, best_x, nodes)
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let n: usize = arg(0, "100").parse().expect("n");
    let m: usize = arg(1, "5").parse().expect("m");
    let tightness: f64 = arg(2, "0.25").parse().expect("tightness");
    let count: u64 = arg(3, "20").parse().expect("count");
    let seed: u64 = arg(4, "2024").parse().expect("seed");
    let out = arg(5, "data/chu_beasley_100_5_25.txt");

    let mut instances = Vec::new();
    for k in 0..count {
        let mut inst = chu_beasley(n, m, tightness, seed + k);
        let start = Instant::now();
        let (opt, x, nodes) = solve_exact(&inst);
        assert!(inst.is_feasible(&x) && inst.value(&x) == opt);
        eprintln!(
            "{}: optimum {opt} ({nodes} nodes, {:.2} s)",
            inst.name,
            start.elapsed().as_secs_f64()
        );
        inst.known_optimum = Some(opt);
        instances.push(inst);
    }
    std::fs::write(&out, write_mknap(&instances)).expect("write instance file");
    eprintln!("wrote {} instances to {out}", instances.len());
}
