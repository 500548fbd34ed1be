//! The two linear minimization oracles agree; the DP scales far beyond
//! enumeration.
//!
//!     cargo run --release --example knapsack_oracles

use std::time::Instant;

use fwcut::oracle::{dot_vertex, enumerate_lmo, knapsack_dp_lmo, knapsack_dp_max, KnapsackSubproblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in [4, 8, 12, 16] {
        let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=20)).collect();
        let cap = weights.iter().sum::<u64>() / 2;
        let sub = KnapsackSubproblem::new(weights.clone(), cap);
        let dir: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let t = Instant::now();
        let brute = enumerate_lmo(k, |x: &[u8]| sub.is_feasible(x), &dir)?;
        let t_enum = t.elapsed();
        let t = Instant::now();
        let dp = knapsack_dp_lmo(&sub, &dir);
        let t_dp = t.elapsed();
        println!(
            "k={k:2}: enumeration {:+.6} in {t_enum:?}, dp {:+.6} in {t_dp:?}",
            dot_vertex(&dir, &brute),
            dot_vertex(&dir, &dp)
        );
    }

    // real-valued profits, integral weights
    let sub = KnapsackSubproblem::new(vec![2, 3, 4], 5);
    let (value, x) = knapsack_dp_max(&sub, &[1.5, 2.25, 3.0]);
    println!("max 1.5x1 + 2.25x2 + 3x3 s.t. 2x1 + 3x2 + 4x3 <= 5: {value} at {x:?}");

    let big = KnapsackSubproblem::new((0..500).map(|_| rng.gen_range(1..=1000)).collect(), 100_000);
    let dir: Vec<f64> = (0..500).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let t = Instant::now();
    let v = knapsack_dp_lmo(&big, &dir);
    println!("k=500, C=100000: {} items taken in {:?}", v.iter().filter(|&&b| b == 1).count(), t.elapsed());
    Ok(())
}
