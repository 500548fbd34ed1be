//! Reduce a knapsack row at an LP point, separate in the reduced space, and
//! lift the cut back with both order policies.
//!
//!     cargo run --example lift_cut

use fwcut::fw::{separate_lazy_afw, FwConfig};
use fwcut::lifting::{lift_cut, max_excess, OrderPolicy};
use fwcut::oracle::{reduce_row_with, ReduceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weights = [5, 7, 4, 3, 6, 8];
    let capacity = 15;
    let x_star = [1.0, 0.0, 0.75, 0.9, 0.5, 0.0];

    let red = reduce_row_with(&weights, capacity, &x_star, ReduceOptions { forced_zero: false, ..Default::default() })?;
    println!(
        "S = {:?}, F1 = {:?}, F0 = {:?}, reduced capacity {}",
        red.sub.index_map, red.sub.fixed_one, red.sub.fixed_zero, red.sub.capacity
    );

    let out = separate_lazy_afw(&red.target, &red.sub, &FwConfig::default())?;
    let Some(cut) = out.cut() else {
        println!("x* restricted to S lies in the reduced hull: {:?}", out.stop_reason());
        return Ok(());
    };
    println!("reduced cut {:?} . x <= {:.4}", cut.alpha, cut.beta);

    for policy in [OrderPolicy::DownThenUp, OrderPolicy::DownOnly] {
        let lifted = lift_cut(cut, &red.sub, policy);
        println!(
            "{policy:?}: alpha {:?}, beta {:.4}, order {:?}",
            lifted.alpha_full.iter().map(|a| (a * 1e4).round() / 1e4).collect::<Vec<_>>(),
            lifted.beta_full,
            lifted.order_used
        );
        println!(
            "  violation at x* {:.6} (reduced {:.6}), DP excess {:.2e}",
            lifted.violation(&x_star),
            cut.violation(&red.target),
            max_excess(&lifted.alpha_full, lifted.beta_full, &weights, capacity)
        );
    }
    Ok(())
}
