//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's algorithms.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// L∞ distance between diagram points.
pub fn linf(x: (f64, f64), y: (f64, f64)) -> f64 {
    (x.0 - y.0).abs().max((x.1 - y.1).abs())
}

/// Exhaustive W_p: every partial injection of `a` into `b`, leftovers to the diagonal.
pub fn brute_wasserstein(a: &[(f64, f64)], b: &[(f64, f64)], p: f64) -> f64 {
    fn go(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>, acc: f64, p: f64, best: &mut f64) {
        if i == a.len() {
            let rest: f64 =
                b.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(y, _)| ((y.1 - y.0) / 2.0).powf(p)).sum();
            *best = best.min(acc + rest);
            return;
        }
        go(i + 1, a, b, used, acc + ((a[i].1 - a[i].0) / 2.0).powf(p), p, best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, acc + linf(a[i], b[j]).powf(p), p, best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, a, b, &mut vec![false; b.len()], 0.0, p, &mut best);
    best.powf(1.0 / p)
}

/// Exhaustive bottleneck distance: the smallest max cost over all partial matchings.
pub fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn go(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        if i == a.len() {
            let rest =
                b.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(y, _)| (y.1 - y.0) / 2.0).fold(0.0, f64::max);
            *best = best.min(acc.max(rest));
            return;
        }
        go(i + 1, a, b, used, acc.max((a[i].1 - a[i].0) / 2.0), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, acc.max(linf(a[i], b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, a, b, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

/// Plain double loop over all pairs, sorted descending.
pub fn brute_interconnectivity(points: &[(f64, f64)]) -> Vec<usize> {
    let mut counts: Vec<usize> = points
        .iter()
        .map(|&(bi, di)| {
            let r = di - bi;
            points.iter().filter(|&&(bj, dj)| (bj - bi).hypot(dj - di) < r).count()
        })
        .collect();
    counts.sort_unstable_by(|x, y| y.cmp(x));
    counts
}

/// Gaussian-sum stable vector straight from the definition, sorted descending.
pub fn brute_stable(points: &[(f64, f64)], delta: f64) -> Vec<f64> {
    let n = points.len() as f64;
    let mut values: Vec<f64> = points
        .iter()
        .map(|&(bi, di)| {
            let var = di - bi + delta;
            points
                .iter()
                .map(|&(bj, dj)| {
                    let q = (bj - bi).powi(2) + (dj - di).powi(2);
                    (-q / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var)
                })
                .sum::<f64>()
                / n
        })
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Betti numbers (β0, β1) of the Rips complex `{σ : diam σ ≤ τ}` on a
/// distance matrix, by union-find for β0 and GF(2) ranks for β1.
pub fn rips_betti(dist: &[Vec<f64>], tau: f64) -> (usize, usize) {
    let n = dist.len();
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| dist[i][j] <= tau).collect();
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if dist[i][j] <= tau && dist[i][k] <= tau && dist[j][k] <= tau {
                    triangles.push([i, j, k]);
                }
            }
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(i, j) in &edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            components -= 1;
        }
    }

    let edge_index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let boundary2: Vec<Vec<usize>> = triangles
        .iter()
        .map(|&[i, j, k]| vec![edge_index[&(i, j)], edge_index[&(i, k)], edge_index[&(j, k)]])
        .collect();
    let rank_d1 = n - components;
    let rank_d2 = gf2_rank(&boundary2, edges.len());
    (components, edges.len() - rank_d1 - rank_d2)
}

/// Rank over GF(2) of the columns given by their supports.
pub fn gf2_rank(columns: &[Vec<usize>], rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for column in columns {
        let mut v = vec![0u64; words];
        for &r in column {
            v[r / 64] ^= 1 << (r % 64);
        }
        for b in &basis {
            let pivot = leading_bit(b).expect("basis vectors are nonzero");
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        if leading_bit(&v).is_some() {
            basis.push(v);
            basis.sort_by_key(|b| std::cmp::Reverse(leading_bit(b)));
        }
    }
    basis.len()
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(k, &w)| 64 * k + 63 - w.leading_zeros() as usize)
}

pub fn euclidean_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|x| points.iter().map(|y| x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()).collect())
        .collect()
}

/// 1D optimal transport cost between equal-size samples: sort both, pair in order.
pub fn transport_1d(mut x: Vec<f64>, mut y: Vec<f64>) -> f64 {
    assert_eq!(x.len(), y.len());
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum()
}
