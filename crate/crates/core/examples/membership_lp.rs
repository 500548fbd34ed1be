//! Exact hull membership through the bundled simplex, and the LP itself.
//!
//!     cargo run --example membership_lp

use fwcut::lp::{membership_test, solve, LpProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vertices = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    for p in [[0.5, 0.5], [0.2, 0.3], [0.9, 0.9]] {
        let m = membership_test(&p, &vertices)?;
        println!("{p:?}: inside {}, distance >= {:.4}", m.inside, m.distance_lb);
    }

    // max 6x1 + 4x2 s.t. 3x1 + 5x2 <= 7, x in [0,1]^2
    let mut lp = LpProblem::new(vec![6.0, 4.0]);
    lp.add_row(vec![3.0, 5.0], 7.0);
    let sol = solve(&lp)?;
    println!("LP optimum {} at {:?}, duals {:?}", sol.objective_value, sol.x, sol.duals);
    Ok(())
}
