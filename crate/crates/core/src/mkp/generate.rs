use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MkpInstance;

/// Random instance in the style of Chu and Beasley: `a_ij ~ U{1..1000}`,
/// `b_i = tightness · Σ_j a_ij`, `c_j = Σ_i a_ij / m + 500·U(0,1)`.
pub fn chu_beasley(n: usize, m: usize, tightness: f64, seed: u64) -> MkpInstance {
    assert!(n > 0 && m > 0, "empty instance");
    assert!(tightness > 0.0 && tightness < 1.0, "tightness must lie in (0, 1)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<Vec<u64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(1..=1000u64)).collect())
        .collect();
    let capacities = weights
        .iter()
        .map(|row| (tightness * row.iter().sum::<u64>() as f64).floor() as u64)
        .collect();
    let profits = (0..n)
        .map(|j| {
            let col: u64 = weights.iter().map(|row| row[j]).sum();
            (col as f64 / m as f64 + 500.0 * rng.gen::<f64>()).floor() as i64
        })
        .collect();
    MkpInstance {
        name: format!("cb-{n}-{m}-{seed}"),
        n,
        m,
        profits,
        weights,
        capacities,
        known_optimum: None,
        assignment: Vec::new(),
    }
}

/// Serialize plain MKP instances in the mknap layout. Unknown optima are
/// written as 0.
pub fn write_mknap(instances: &[MkpInstance]) -> String {
    let mut out = format!("{}\n", instances.len());
    for inst in instances {
        assert!(inst.assignment.is_empty(), "assignment instances have no mknap form");
        out.push_str(&format!("{} {} {}\n", inst.n, inst.m, inst.known_optimum.unwrap_or(0)));
        let line = |v: Vec<String>| v.join(" ") + "\n";
        out.push_str(&line(inst.profits.iter().map(|c| c.to_string()).collect()));
        for row in &inst.weights {
            out.push_str(&line(row.iter().map(|a| a.to_string()).collect()));
        }
        out.push_str(&line(inst.capacities.iter().map(|b| b.to_string()).collect()));
    }
    out
}
