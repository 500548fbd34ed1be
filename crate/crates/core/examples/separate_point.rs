//! Separate a fractional point from a small knapsack polytope.
//!
//!     cargo run --example separate_point

use fwcut::fw::{separate_lazy_afw, FwConfig, TargetPoint};
use fwcut::oracle::{EnumerationOracle, KnapsackSubproblem, LinearOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 2x1 + 3x2 + 4x3 <= 5
    let sub = KnapsackSubproblem::new(vec![2, 3, 4], 5);

    for point in [vec![1.0, 1.0, 1.0], vec![0.5, 0.5, 0.0], vec![0.9, 0.6, 0.3]] {
        let target = TargetPoint::new(point.clone())?;
        let out = separate_lazy_afw(&target, &sub, &FwConfig::default())?;
        print!("{point:?}: ");
        match out.cut() {
            Some(cut) => {
                println!(
                    "cut {:?} . x <= {:.4} (violation {:.4}, {} iterations, {} oracle calls)",
                    cut.alpha.iter().map(|a| (a * 1e4).round() / 1e4).collect::<Vec<_>>(),
                    cut.beta,
                    cut.violation_at_target,
                    out.stats.iterations,
                    out.stats.oracle_calls
                );
                // brute-force check against all feasible points
                let all = EnumerationOracle::new(sub.dim(), |x: &[u8]| sub.is_feasible(x))?;
                let worst = all
                    .vertices()
                    .iter()
                    .map(|v| cut.violation(&v.iter().map(|&b| b as f64).collect::<Vec<_>>()))
                    .fold(f64::NEG_INFINITY, f64::max);
                println!("  max violation over feasible points: {worst:.2e}");
            }
            None => println!("{:?} after {} iterations", out.stop_reason(), out.stats.iterations),
        }
    }

    // the oracle trait is all the separator needs
    assert_eq!(sub.minimize(&[-1.0, -1.0, -1.0])?, vec![1, 1, 0]);
    Ok(())
}
