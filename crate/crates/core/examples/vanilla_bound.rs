//! Vanilla Frank-Wolfe with the agnostic step certifies non-membership
//! within T = ceil(8 D^2 / dist^2 - 3) iterations.
//!
//!     cargo run --example vanilla_bound

use fwcut::fw::{iteration_bound, separate_vanilla, FwConfig, StepRule, TargetPoint};
use fwcut::lp::membership_test;
use fwcut::oracle::{EnumerationOracle, KnapsackSubproblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sub = KnapsackSubproblem::new(vec![3, 4, 5, 6], 9);
    let vertices = EnumerationOracle::new(4, |x: &[u8]| sub.is_feasible(x))?.vertices();
    let diameter_sq = vertices
        .iter()
        .flat_map(|a| vertices.iter().map(move |b| (a, b)))
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count() as f64)
        .fold(0.0, f64::max);

    let target = TargetPoint::new(vec![0.8, 0.8, 0.6, 0.2])?;
    let m = membership_test(&target, &vertices)?;
    println!("inside hull: {}, distance >= {:.4}", m.inside, m.distance_lb);

    let config = FwConfig {
        step_rule: StepRule::Agnostic,
        ..FwConfig::default()
    };
    let out = separate_vanilla(&target, &sub, &config)?;
    println!("stopped after {} iterations: {:?}", out.stats.iterations, out.stop_reason());
    if m.distance_lb > 0.0 {
        // the L1-based distance is a lower bound, so this bound is an upper bound on T
        let t = iteration_bound(diameter_sq, m.distance_lb * m.distance_lb)?;
        println!("bound with D^2 = {diameter_sq}: T <= {t}");
        assert!(out.stats.iterations as u64 <= t);
    }
    Ok(())
}
