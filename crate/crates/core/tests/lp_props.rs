mod common;

use common::*;
use fwcut::lp::{membership_test, solve, CutPool, LpProblem, LpSolver, LpStatus};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Rows = Vec<(Vec<f64>, f64)>;

fn small_lp() -> impl Strategy<Value = (Vec<f64>, Rows)> {
    (1usize..=6, 0usize..=4).prop_flat_map(|(n, m)| {
        let row = (prop::collection::vec(-5i32..=5, n), -3i32..=8)
            .prop_map(|(a, b)| (a.into_iter().map(f64::from).collect::<Vec<f64>>(), f64::from(b)));
        (
            prop::collection::vec((-6i32..=6).prop_map(f64::from), n),
            prop::collection::vec(row, m),
        )
    })
}

fn problem(c: &[f64], rows: &Rows) -> LpProblem {
    let mut lp = LpProblem::new(c.to_vec());
    for (a, b) in rows {
        lp.add_row(a.clone(), *b);
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn simplex_matches_vertex_enumeration((c, rows) in small_lp()) {
        let sol = solve(&problem(&c, &rows)).unwrap();
        match brute_lp(&c, &rows) {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!((sol.objective_value - best).abs() <= 1e-7, "{} vs {}", sol.objective_value, best);
                prop_assert!((dot(&c, &sol.x) - sol.objective_value).abs() <= 1e-7);
                for v in &sol.x {
                    prop_assert!((-1e-9..=1.0 + 1e-9).contains(v));
                }
                for (a, b) in &rows {
                    prop_assert!(dot(a, &sol.x) <= b + 1e-7);
                }
                // strong duality with the box: b·y + Σ max(0, c_j − (Aᵀy)_j)
                let y = sol.duals.as_ref().unwrap();
                prop_assert!(y.iter().all(|&v| v >= -1e-9));
                let mut dual = dot(&rows.iter().map(|r| r.1).collect::<Vec<_>>(), y);
                for j in 0..c.len() {
                    let aty: f64 = rows.iter().zip(y).map(|((a, _), yi)| a[j] * yi).sum();
                    dual += (c[j] - aty).max(0.0);
                }
                prop_assert!((dual - sol.objective_value).abs() <= 1e-6, "dual {} primal {}", dual, sol.objective_value);
            }
        }
    }

    #[test]
    fn warm_row_matches_cold_solve((c, rows) in small_lp(), extra in (prop::collection::vec(-5i32..=5, 6), -2i32..=6)) {
        let lp = problem(&c, &rows);
        let mut warm = LpSolver::new(&lp).unwrap();
        let first = warm.solve().unwrap();
        let a: Vec<f64> = extra.0[..c.len()].iter().map(|&v| f64::from(v)).collect();
        let b = f64::from(extra.1);
        warm.add_row(a.clone(), b).unwrap();
        let again = warm.solve().unwrap();
        let mut bigger = rows.clone();
        bigger.push((a, b));
        let cold = solve(&problem(&c, &bigger)).unwrap();
        prop_assert_eq!(again.status, cold.status);
        if cold.status == LpStatus::Optimal {
            prop_assert!((again.objective_value - cold.objective_value).abs() <= 1e-7);
            // a row can only lower the bound
            prop_assert!(first.status == LpStatus::Optimal);
            prop_assert!(again.objective_value <= first.objective_value + 1e-7);
        }
    }

    #[test]
    fn valid_cut_never_raises_the_bound(w in prop::collection::vec(1u64..=9, 2..=6), seed in 0u64..1000) {
        // add random valid inequalities for the knapsack integer hull
        let cap = w.iter().sum::<u64>() / 2;
        let n = w.len();
        let points = feasible_points(&w, cap);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..n).map(|j| 1.0 + (j as f64 * 0.37).sin()).collect();
        let mut lp = LpProblem::new(c.clone());
        lp.add_row(w.iter().map(|&v| v as f64).collect(), cap as f64);
        let mut solver = LpSolver::new(&lp).unwrap();
        let mut last = solver.solve().unwrap().objective_value;
        let p = points.iter().map(|x| dot(&c, &as_f64(x))).fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..4 {
            let alpha: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -1.0..2.0)).collect();
            let beta = points.iter().map(|x| dot(&alpha, &as_f64(x))).fold(f64::NEG_INFINITY, f64::max);
            solver.add_row(alpha, beta).unwrap();
            let z = solver.solve().unwrap().objective_value;
            prop_assert!(z <= last + 1e-7);
            prop_assert!(z >= p - 1e-7);
            last = z;
        }
    }

    #[test]
    fn membership_agrees_with_exact_distance(
        w in prop::collection::vec(1u64..=12, 2..=7),
        x in prop::collection::vec(-0.1f64..1.1, 7),
    ) {
        let cap = w.iter().sum::<u64>() / 2;
        let points = feasible_points(&w, cap);
        let x = &x[..w.len()];
        let m = membership_test(x, &points).unwrap();
        let (dist, _) = hull_distance(x, &points);
        if m.inside {
            prop_assert!(dist <= 1e-6);
        } else {
            prop_assert!(dist > 0.0);
            prop_assert!(m.distance_lb <= dist + 1e-9);
        }
    }
}

#[test]
fn pool_filters_parallel_cuts() {
    let mut pool = CutPool::new();
    assert!(pool.insert(&[1.0, 2.0], 3.0));
    assert!(!pool.insert(&[2.0, 4.0], 6.0));
    assert!(pool.insert(&[1.0, 2.0], 2.5));
    assert!(pool.insert(&[2.0, 1.0], 3.0));
    assert_eq!(pool.len(), 3);
}
