//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn as_f64(v: &[u8]) -> Vec<f64> {
    v.iter().map(|&b| b as f64).collect()
}

/// Every `x in {0,1}^k` with `<w, x> <= cap`, by plain enumeration.
pub fn feasible_points(weights: &[u64], cap: u64) -> Vec<Vec<u8>> {
    let k = weights.len();
    assert!(k <= 20);
    (0u32..1 << k)
        .map(|mask| (0..k).map(|i| ((mask >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|x| weights.iter().zip(x).map(|(&w, &b)| w * b as u64).sum::<u64>() <= cap)
        .collect()
}

/// `max <profits, x>` over the feasible points, by enumeration.
pub fn brute_max(weights: &[u64], cap: u64, profits: &[f64]) -> f64 {
    feasible_points(weights, cap)
        .iter()
        .map(|x| dot(profits, &as_f64(x)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest squared distance between two points of the list.
pub fn diameter_sq(points: &[Vec<u8>]) -> f64 {
    let mut d: f64 = 0.0;
    for a in points {
        for b in points {
            d = d.max(a.iter().zip(b).filter(|(x, y)| x != y).count() as f64);
        }
    }
    d
}

/// Solve `A x = b` (square) by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-12 {
            return None;
        }
        a.swap(p, col);
        b.swap(p, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Euclidean distance from `target` to `conv(vertices)` and the nearest
/// point, by Wolfe's minimum-norm-point algorithm.
pub fn hull_distance(target: &[f64], vertices: &[Vec<u8>]) -> (f64, Vec<f64>) {
    let pts: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| v.iter().zip(target).map(|(&b, &t)| b as f64 - t).collect())
        .collect();
    let scale = pts.iter().map(|p| dot(p, p)).fold(1.0, f64::max);
    let first = (0..pts.len())
        .min_by(|&a, &b| dot(&pts[a], &pts[a]).total_cmp(&dot(&pts[b], &pts[b])))
        .unwrap();
    let mut set = vec![first];
    let mut lam = vec![1.0];
    let combine = |set: &[usize], lam: &[f64]| {
        let mut x = vec![0.0; target.len()];
        for (&i, &l) in set.iter().zip(lam) {
            for (xi, p) in x.iter_mut().zip(&pts[i]) {
                *xi += l * p;
            }
        }
        x
    };
    let mut x = pts[first].clone();
    for _ in 0..100_000 {
        let j = (0..pts.len())
            .min_by(|&a, &b| dot(&x, &pts[a]).total_cmp(&dot(&x, &pts[b])))
            .unwrap();
        if dot(&x, &x) - dot(&x, &pts[j]) <= 1e-13 * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lam.push(0.0);
        loop {
            // affine minimizer of the current corral
            let s = set.len();
            let mut a = vec![vec![0.0; s + 1]; s + 1];
            for r in 0..s {
                for c in 0..s {
                    a[r][c] = dot(&pts[set[r]], &pts[set[c]]);
                }
                a[r][s] = 1.0;
                a[s][r] = 1.0;
            }
            let mut rhs = vec![0.0; s + 1];
            rhs[s] = 1.0;
            let alpha = match gauss_solve(a, rhs) {
                Some(sol) => sol[..s].to_vec(),
                None => {
                    // affinely dependent: drop the newest point
                    set.pop();
                    lam.pop();
                    break;
                }
            };
            if alpha.iter().all(|&v| v > 1e-15) {
                lam = alpha;
                break;
            }
            let mut theta: f64 = 1.0;
            for (&l, &a) in lam.iter().zip(&alpha) {
                if a <= 1e-15 && l - a > 0.0 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, &a) in lam.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let keep: Vec<bool> = lam.iter().map(|&l| l > 1e-15).collect();
            let mut k = 0;
            set.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            lam.retain(|&l| l > 1e-15);
            let total: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(&set, &lam);
    }
    let nearest = x.iter().zip(target).map(|(d, t)| d + t).collect();
    (dot(&x, &x).sqrt(), nearest)
}

/// A random convex combination of a random subset of the points.
pub fn random_convex_combination<R: Rng>(rng: &mut R, points: &[Vec<u8>]) -> Vec<f64> {
    let k = points[0].len();
    let count = rng.gen_range(1..=points.len().min(k + 2));
    let mut x = vec![0.0; k];
    let weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let v = &points[rng.gen_range(0..points.len())];
        for (xi, &b) in x.iter_mut().zip(v) {
            *xi += w / total * b as f64;
        }
    }
    x
}

/// Random knapsack with `k` items whose capacity cuts into the cube.
pub fn random_knapsack<R: Rng>(rng: &mut R, k: usize) -> (Vec<u64>, u64) {
    let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=20)).collect();
    let total: u64 = weights.iter().sum();
    let cap = rng.gen_range(1..total.max(2));
    (weights, cap)
}

/// Optimum of `max c·x, Ax <= b, 0 <= x <= 1` by enumerating all vertices
/// (intersections of `n` tight constraints). `None` when infeasible.
pub fn brute_lp(c: &[f64], rows: &[(Vec<f64>, f64)]) -> Option<f64> {
    let n = c.len();
    // constraint list: rows, x_j >= 0, x_j <= 1 as (coeffs, rhs) equalities
    let mut cons: Vec<(Vec<f64>, f64)> = rows.to_vec();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), 0.0));
        cons.push((e, 1.0));
    }
    let feasible = |x: &[f64]| {
        x.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)) && rows.iter().all(|(a, b)| dot(a, x) <= b + 1e-9)
    };
    let mut best: Option<f64> = None;
    let total = cons.len();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| cons[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| cons[i].1).collect();
        if let Some(x) = gauss_solve(a, b) {
            if feasible(&x) {
                let v = dot(c, &x);
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < total - n + i {
                idx[i] += 1;
                for k in i + 1..n {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `max <profits, x>` over `{x in {0,1}^n : <w, x> <= cap}` by a textbook
/// capacity DP. Items with nonpositive profit are never worth taking.
pub fn dp_reference(weights: &[u64], cap: u64, profits: &[f64]) -> f64 {
    let cap = cap as usize;
    let mut best = vec![0.0f64; cap + 1];
    for (&w, &p) in weights.iter().zip(profits) {
        if p <= 0.0 {
            continue;
        }
        let w = w as usize;
        if w == 0 {
            best.iter_mut().for_each(|b| *b += p);
            continue;
        }
        for c in (w..=cap).rev() {
            best[c] = best[c].max(best[c - w] + p);
        }
    }
    best[cap]
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}
